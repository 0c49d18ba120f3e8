//! JSON form of a computed group, and the on-disk cache of such records.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use grope_core::{Flags, Grading, Presentation, SpaceId, SpaceResult};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupRecord {
    pub rank: usize,
    pub torsion: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlagsRecord {
    pub framed: bool,
    pub loops_exact: bool,
    pub mod_loops: Option<usize>,
    pub presentation: String,
}

impl From<&Flags> for FlagsRecord {
    fn from(f: &Flags) -> Self {
        FlagsRecord {
            framed: f.framed,
            loops_exact: f.loops_exact,
            mod_loops: f.mod_loops,
            presentation: f.presentation.name().into(),
        }
    }
}

impl FlagsRecord {
    pub fn to_flags(&self) -> Option<Flags> {
        let presentation = match self.presentation.as_str() {
            "STU" => Presentation::Stu,
            "IHX" => Presentation::Ihx,
            _ => return None,
        };
        Some(Flags { framed: self.framed, loops_exact: self.loops_exact, mod_loops: self.mod_loops, presentation })
    }
}

/// Serialized [`SpaceResult`]. The basis itself is summarized by its
/// size and by `digest`, the content hash of basis and relations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceRecord {
    pub space: String,
    pub label: String,
    pub degree: usize,
    pub grading: String,
    pub basis_size: usize,
    pub relation_counts: BTreeMap<String, usize>,
    pub group: GroupRecord,
    pub flags: FlagsRecord,
    pub wall_time_ms: u64,
    pub digest: String,
}

pub fn grading_name(g: Grading) -> &'static str {
    match g {
        Grading::Vassiliev => "vassiliev",
        Grading::Grope => "grope",
    }
}

impl From<&SpaceResult> for SpaceRecord {
    fn from(r: &SpaceResult) -> Self {
        SpaceRecord {
            space: r.space.name().into(),
            label: r.label(),
            degree: r.degree,
            grading: grading_name(r.grading).into(),
            basis_size: r.basis_size(),
            relation_counts: r.relation_counts.iter().map(|(t, n)| (t.name().into(), *n)).collect(),
            group: GroupRecord { rank: r.group.free_rank, torsion: r.group.torsion.clone() },
            flags: (&r.flags).into(),
            wall_time_ms: r.wall_time_ms.unwrap_or(0),
            digest: r.content_digest(),
        }
    }
}

impl SpaceRecord {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("records always serialize")
    }

    /// The group in `Z^r ⊕ Z/d` notation.
    pub fn group_text(&self) -> String {
        grope_core::GradedAbelianGroup { free_rank: self.group.rank, torsion: self.group.torsion.clone() }.to_string()
    }

    fn matches(&self, space: SpaceId, flags: &Flags, degree: usize) -> bool {
        self.space == space.name() && self.degree == degree && self.flags.to_flags().as_ref() == Some(flags)
    }
}

/// Results stored as `<root>/<space>/<flags-hash>/<degree>.json`.
///
/// Writes go to a temporary file that is then renamed into place, so
/// concurrent writers of the same record leave one complete copy.
#[derive(Clone, Debug)]
pub struct Cache {
    root: PathBuf,
}

static TMP_COUNTER: AtomicU64 = AtomicU64::new(0);

impl Cache {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Cache { root: root.into() }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn path(&self, space: SpaceId, flags: &Flags, degree: usize) -> PathBuf {
        self.root.join(space.name()).join(flags.hash()).join(format!("{degree}.json"))
    }

    /// A stored record, if present, readable and for the same inputs.
    pub fn load(&self, space: SpaceId, flags: &Flags, degree: usize) -> Option<SpaceRecord> {
        let text = fs::read_to_string(self.path(space, flags, degree)).ok()?;
        let rec: SpaceRecord = serde_json::from_str(&text).ok()?;
        rec.matches(space, flags, degree).then_some(rec)
    }

    pub fn store(&self, rec: &SpaceRecord, space: SpaceId, flags: &Flags) -> io::Result<PathBuf> {
        let path = self.path(space, flags, rec.degree);
        let dir = path.parent().expect("cache paths have a parent");
        fs::create_dir_all(dir)?;
        let n = TMP_COUNTER.fetch_add(1, Ordering::Relaxed);
        let tmp = dir.join(format!(".{}.{}.{n}.tmp", rec.degree, std::process::id()));
        fs::write(&tmp, rec.to_json())?;
        fs::rename(&tmp, &path)?;
        Ok(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use grope_core::Engine;

    #[test]
    fn record_round_trip_and_cache() {
        let r = Engine::new().loop_quotient(2, 1).unwrap();
        let rec = SpaceRecord::from(&r);
        assert_eq!(rec.group, GroupRecord { rank: 0, torsion: vec![2] });
        assert_eq!(rec.label, "A^I_2[1]");
        let back: SpaceRecord = serde_json::from_str(&rec.to_json()).unwrap();
        assert_eq!(back, rec);

        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        assert!(cache.load(SpaceId::AI, &r.flags, 2).is_none());
        let p = cache.store(&rec, SpaceId::AI, &r.flags).unwrap();
        assert!(p.ends_with(format!("AI/{}/2.json", r.flags.hash())));
        assert_eq!(cache.load(SpaceId::AI, &r.flags, 2), Some(rec));
        assert!(cache.load(SpaceId::AI, &Flags::default(), 2).is_none());
        fs::write(&p, "{").unwrap();
        assert!(cache.load(SpaceId::AI, &r.flags, 2).is_none());
    }
}
