//! The graded groups and their cross-checks.
//!
//! Every group is the cokernel of a presentation over an enumerated basis.
//! Rows that kill a single basis element (products, isolated chords,
//! high-loop diagrams) are applied by deleting the column, which leaves
//! the cokernel unchanged and keeps the matrices small.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use sha2::{Digest, Sha256};

use crate::canon::{Canonical, CanonicalKey};
use crate::enumerate::{all_closures, enumerate_open_with, EnumError, EnumSpec, Enumerator, Generator, Grading, Space};
use crate::graph::{ClosedDiagram, UniTrivalentGraph};
use crate::linalg::{cokernel_of_rows, rational_rank_of_rows, GradedAbelianGroup, LinalgError, LinalgOptions};
use crate::relations::{
    as_rows, dedupe, ihx_rows, is_homogeneous, is_vassiliev_homogeneous, stu_rows, Basis, RelationError, RelationRow,
    Tag,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SpaceId {
    /// Open diagrams by Vassiliev degree.
    Bv,
    /// Open diagrams by grope degree.
    Bg,
    /// Closed diagrams.
    A,
    /// Indecomposable closed diagrams.
    AI,
}

impl SpaceId {
    pub const ALL: [SpaceId; 4] = [SpaceId::Bv, SpaceId::Bg, SpaceId::A, SpaceId::AI];

    pub fn name(self) -> &'static str {
        match self {
            SpaceId::Bv => "Bv",
            SpaceId::Bg => "Bg",
            SpaceId::A => "A",
            SpaceId::AI => "AI",
        }
    }

    pub fn from_name(s: &str) -> Option<SpaceId> {
        SpaceId::ALL.into_iter().find(|x| x.name() == s)
    }
}

/// Relations presenting `A_k`: STU alone, or STU together with the IHX
/// relations inside the dashed part.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Presentation {
    #[default]
    Stu,
    Ihx,
}

impl Presentation {
    pub fn name(self) -> &'static str {
        match self {
            Presentation::Stu => "STU",
            Presentation::Ihx => "IHX",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flags {
    /// Keep diagrams with isolated chords.
    pub framed: bool,
    /// Kill diagrams with exactly `m` loops rather than at least `m`.
    pub loops_exact: bool,
    /// Loop quotient `A^I_k[m]`.
    pub mod_loops: Option<usize>,
    pub presentation: Presentation,
}

impl Flags {
    /// Stable text form, hashed into cache paths.
    pub fn describe(&self) -> String {
        let m = self.mod_loops.map_or(String::from("none"), |m| format!("{m}"));
        format!(
            "framed={};loops_exact={};mod_loops={};presentation={}",
            self.framed,
            self.loops_exact,
            m,
            self.presentation.name()
        )
    }

    /// First 16 hex digits of the SHA-256 of [`Flags::describe`].
    pub fn hash(&self) -> String {
        hex(&Sha256::digest(self.describe().as_bytes())[..8])
    }
}

fn hex(bytes: &[u8]) -> String {
    use core::fmt::Write;
    let mut s = String::with_capacity(2 * bytes.len());
    for b in bytes {
        let _ = write!(s, "{b:02x}");
    }
    s
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceResult {
    pub space: SpaceId,
    pub degree: usize,
    pub grading: Grading,
    pub flags: Flags,
    /// Canonical keys of the basis, in column order.
    pub basis: Vec<CanonicalKey>,
    pub relation_counts: BTreeMap<Tag, usize>,
    pub group: GradedAbelianGroup,
    pub cap: Option<usize>,
    /// Self-loop edges where IHX imposes nothing.
    pub skipped_self_loops: usize,
    /// Filled in by callers that measure time.
    pub wall_time_ms: Option<u64>,
}

impl SpaceResult {
    pub fn basis_size(&self) -> usize {
        self.basis.len()
    }

    /// Human-readable name such as `A^I_3[2]`.
    pub fn label(&self) -> String {
        label(self.space, self.degree, &self.flags)
    }

    /// SHA-256 over everything that determines the group: space, degree,
    /// flags, basis manifest and relation manifest.
    pub fn content_digest(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.label().as_bytes());
        h.update(self.flags.describe().as_bytes());
        for k in &self.basis {
            h.update((k.as_bytes().len() as u32).to_le_bytes());
            h.update(k.as_bytes());
        }
        for (t, n) in &self.relation_counts {
            h.update(t.name().as_bytes());
            h.update((*n as u64).to_le_bytes());
        }
        hex(&h.finalize())
    }
}

pub fn label(space: SpaceId, degree: usize, flags: &Flags) -> String {
    let base = match space {
        SpaceId::Bv => format!("B^v_{degree}"),
        SpaceId::Bg => format!("B^g_{degree}"),
        SpaceId::A => format!("A_{degree}"),
        SpaceId::AI => format!("A^I_{degree}"),
    };
    match (space, flags.mod_loops) {
        (SpaceId::A | SpaceId::AI, Some(m)) if flags.loops_exact => format!("{base}[={m}]"),
        (SpaceId::A | SpaceId::AI, Some(m)) => format!("{base}[{m}]"),
        _ => base,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SpaceError {
    #[error("degree {degree} is too small for {space}")]
    DegreeTooSmall { space: &'static str, degree: usize },
    #[error("loop quotient needs m >= 1")]
    BadLoopBound,
    #[error(transparent)]
    Enumeration(#[from] EnumError),
    #[error(transparent)]
    Relation(#[from] RelationError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Generators and relation rows of the closed diagrams of one Vassiliev
/// degree, kept for reuse.
#[derive(Clone, Debug)]
pub struct ClosedData {
    pub basis: Basis<ClosedDiagram>,
    pub self_neg: Vec<RelationRow>,
    pub stu: Vec<RelationRow>,
    ihx: Option<(Vec<RelationRow>, usize)>,
}

impl ClosedData {
    /// IHX rows inside the dashed part and the skipped self-loops.
    pub fn ihx(&mut self) -> Result<(&[RelationRow], usize), SpaceError> {
        if self.ihx.is_none() {
            let r = ihx_rows(&self.basis)?;
            self.ihx = Some((r.rows, r.skipped_self_loops));
        }
        let (rows, s) = self.ihx.as_ref().unwrap();
        Ok((rows, *s))
    }
}

/// Open diagrams of one degree with their relations.
#[derive(Clone, Debug)]
pub struct OpenData {
    pub basis: Basis<UniTrivalentGraph>,
    pub self_neg: Vec<RelationRow>,
    pub ihx: Vec<RelationRow>,
    pub skipped_self_loops: usize,
}

/// A presentation after deleting killed columns.
#[derive(Clone, Debug, Default)]
struct Reduced {
    ncols: usize,
    rows: Vec<Vec<(usize, i64)>>,
    /// New column of each old column, `None` if killed.
    map: Vec<Option<usize>>,
}

impl Reduced {
    fn new(n: usize, killed: impl Fn(usize) -> bool) -> Self {
        let mut map = vec![None; n];
        let mut ncols = 0;
        for (i, slot) in map.iter_mut().enumerate() {
            if !killed(i) {
                *slot = Some(ncols);
                ncols += 1;
            }
        }
        Reduced { ncols, rows: Vec::new(), map }
    }

    fn image(&self, entries: &[(usize, i64)]) -> Vec<(usize, i64)> {
        let mut out: Vec<(usize, i64)> =
            entries.iter().filter_map(|&(c, v)| self.map[c].map(|c| (c, v))).filter(|e| e.1 != 0).collect();
        out.sort_unstable();
        // merge repeated columns
        let mut merged: Vec<(usize, i64)> = Vec::with_capacity(out.len());
        for (c, v) in out {
            match merged.last_mut() {
                Some(last) if last.0 == c => last.1 += v,
                _ => merged.push((c, v)),
            }
        }
        merged.retain(|e| e.1 != 0);
        merged
    }

    fn push_all<'a>(&mut self, rows: impl IntoIterator<Item = &'a RelationRow>) {
        for r in rows {
            let img = self.image(&r.entries);
            if !img.is_empty() {
                self.rows.push(img);
            }
        }
    }

    fn finish(mut self) -> Self {
        self.rows.sort();
        self.rows.dedup();
        self
    }
}

/// Outcome of the averaging map check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChiReport {
    pub degree: usize,
    pub rank_b: usize,
    pub rank_ai: usize,
    /// Rational dimension of the image of χ in `A^I_k`.
    pub image_rank: usize,
    /// Whether χ sends every relation of `B^v_k` into the relations of `A^I_k`.
    pub well_defined: bool,
    /// A relation row of `B^v_k` (basis positions and coefficients) whose
    /// image is not a relation.
    pub witness: Option<Vec<(usize, i64)>>,
}

impl ChiReport {
    pub fn injective(&self) -> bool {
        self.well_defined && self.image_rank == self.rank_b
    }

    pub fn passed(&self) -> bool {
        self.rank_b == self.rank_ai && self.injective()
    }
}

/// Outcome of the reversal check in one grope degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RhoReport {
    pub grope_degree: usize,
    /// Connected diagrams tested.
    pub checked: usize,
    pub failures: Vec<RhoFailure>,
}

impl RhoReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RhoFailure {
    pub key: CanonicalKey,
    pub vassiliev_degree: usize,
    pub loops: usize,
    /// Whether `ρ(D) - ε D` vanishes for the opposite sign `ε`.
    pub opposite_sign_holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneLegReport {
    pub degree: usize,
    pub one_leg_diagrams: usize,
    /// Rank of their span in `A^I_k ⊗ Q`.
    pub rank: usize,
}

/// Rational ranks of the pieces of `B^g_k` with fixed Vassiliev degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigradedReport {
    pub grope_degree: usize,
    pub total_rank: usize,
    /// `(v, b1, rank)` for every nonempty piece.
    pub pieces: Vec<(usize, usize, usize)>,
    /// Rows whose terms leave the piece of their source.
    pub mixed_rows: usize,
}

impl BigradedReport {
    pub fn piece_sum(&self) -> usize {
        self.pieces.iter().map(|p| p.2).sum()
    }

    /// Smallest Vassiliev degree carrying a nonvanishing rational class.
    pub fn min_vassiliev(&self) -> Option<usize> {
        self.pieces.iter().filter(|p| p.2 > 0).map(|p| p.0).min()
    }

    pub fn bound(&self) -> usize {
        self.grope_degree / 2 + 1
    }

    pub fn passed(&self) -> bool {
        self.mixed_rows == 0
            && self.total_rank == self.piece_sum()
            && self.min_vassiliev().is_none_or(|v| v >= self.bound())
    }
}

/// Count of relation rows whose terms differ in degree.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HomogeneityReport {
    pub space: String,
    /// Rows checked, per tag.
    pub rows: BTreeMap<Tag, usize>,
    /// Rows whose terms differ in Vassiliev or grope degree, per tag.
    pub inhomogeneous: BTreeMap<Tag, usize>,
    /// Rows whose terms differ in Vassiliev degree, per tag.
    pub vassiliev_inhomogeneous: BTreeMap<Tag, usize>,
}

impl HomogeneityReport {
    pub fn total_inhomogeneous(&self) -> usize {
        self.inhomogeneous.values().sum()
    }

    fn record<D: crate::enumerate::Family>(&mut self, basis: &Basis<D>, rows: &[RelationRow]) {
        for r in rows {
            *self.rows.entry(r.tag).or_insert(0) += 1;
            if !is_homogeneous(basis, r) {
                *self.inhomogeneous.entry(r.tag).or_insert(0) += 1;
            }
            if !is_vassiliev_homogeneous(basis, r) {
                *self.vassiliev_inhomogeneous.entry(r.tag).or_insert(0) += 1;
            }
        }
    }
}

impl fmt::Display for HomogeneityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.space)?;
        for (t, n) in &self.rows {
            let bad = self.inhomogeneous.get(t).copied().unwrap_or(0);
            write!(f, " {}={}/{}", t.name(), bad, n)?;
        }
        Ok(())
    }
}

/// Which groups the conjectured splitting is assembled from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConjectureReading {
    /// Loop quotients of `A^I`.
    Indecomposable,
    /// Loop quotients of `A`.
    Full,
}

/// Memoizing front end for all computations.
#[derive(Clone, Debug)]
pub struct Engine {
    open: Enumerator<UniTrivalentGraph>,
    closed: Enumerator<ClosedDiagram>,
    closed_data: BTreeMap<usize, ClosedData>,
    pub opts: LinalgOptions,
    cap: Option<usize>,
}

impl Default for Engine {
    fn default() -> Self {
        Engine::new()
    }
}

impl Engine {
    pub fn new() -> Self {
        Engine {
            open: Enumerator::open(),
            closed: Enumerator::closed(false),
            closed_data: BTreeMap::new(),
            opts: LinalgOptions::default(),
            cap: None,
        }
    }

    /// Largest number of classes allowed in one enumeration level.
    pub fn with_cap(mut self, cap: Option<usize>) -> Self {
        self.cap = cap;
        self.open.set_cap(cap);
        self.closed.set_cap(cap);
        self
    }

    pub fn with_options(mut self, opts: LinalgOptions) -> Self {
        self.opts = opts;
        self
    }

    /// Closed diagrams of Vassiliev degree `k` with AS and STU rows.
    pub fn closed_data(&mut self, k: usize) -> Result<&mut ClosedData, SpaceError> {
        if !self.closed_data.contains_key(&k) {
            let mut gens = self.closed.vassiliev_degree(k..=k)?;
            gens.sort_by(|a, b| a.key.cmp(&b.key));
            let basis = Basis::new(gens);
            let self_neg = as_rows(&basis)?;
            let stu = stu_rows(&basis)?;
            self.closed_data.insert(k, ClosedData { basis, self_neg, stu, ihx: None });
        }
        Ok(self.closed_data.get_mut(&k).unwrap())
    }

    /// Open diagrams of degree `k` in the given grading with AS and IHX rows.
    pub fn open_data(&mut self, grading: Grading, k: usize) -> Result<OpenData, SpaceError> {
        if k < 2 {
            return Err(SpaceError::DegreeTooSmall { space: "B", degree: k });
        }
        let spec = EnumSpec { cap: self.cap, ..EnumSpec::new(Space::B, grading, k) };
        let basis = Basis::new(enumerate_open_with(&mut self.open, &spec)?);
        let self_neg = as_rows(&basis)?;
        let ihx = ihx_rows(&basis)?;
        Ok(OpenData { basis, self_neg, ihx: ihx.rows, skipped_self_loops: ihx.skipped_self_loops })
    }

    #[allow(clippy::too_many_arguments)]
    fn result(
        &self,
        space: SpaceId,
        degree: usize,
        grading: Grading,
        flags: Flags,
        basis: Vec<CanonicalKey>,
        relation_counts: BTreeMap<Tag, usize>,
        group: GradedAbelianGroup,
        skipped_self_loops: usize,
    ) -> SpaceResult {
        SpaceResult {
            space,
            degree,
            grading,
            flags,
            basis,
            relation_counts,
            group,
            cap: self.cap,
            skipped_self_loops,
            wall_time_ms: None,
        }
    }

    /// `B^v_k` or `B^g_k`: open diagrams modulo AS and IHX.
    pub fn compute_b(&mut self, grading: Grading, k: usize) -> Result<SpaceResult, SpaceError> {
        let d = self.open_data(grading, k)?;
        let mut red = Reduced::new(d.basis.len(), |_| false);
        red.push_all(d.self_neg.iter().chain(&d.ihx));
        let red = red.finish();
        let group = cokernel_of_rows(red.ncols, red.rows, &self.opts)?;
        let mut counts = BTreeMap::new();
        counts.insert(Tag::SelfNeg, d.self_neg.len());
        counts.insert(Tag::Ihx, d.ihx.len());
        let space = if grading == Grading::Vassiliev { SpaceId::Bv } else { SpaceId::Bg };
        Ok(self.result(space, k, grading, Flags::default(), d.basis.keys(), counts, group, d.skipped_self_loops))
    }

    /// Rational dimension of `B^v_k` or `B^g_k`.
    pub fn b_rank(&mut self, grading: Grading, k: usize) -> Result<usize, SpaceError> {
        let d = self.open_data(grading, k)?;
        let mut red = Reduced::new(d.basis.len(), |_| false);
        red.push_all(d.self_neg.iter().chain(&d.ihx));
        let red = red.finish();
        Ok(red.ncols - rational_rank_of_rows(red.ncols, &red.rows, &self.opts)?.rank)
    }

    /// `A_k` modulo AS and the chosen presentation; isolated chords are
    /// killed unless `flags.framed`, and `flags.mod_loops` applies a loop
    /// quotient.
    pub fn compute_a(&mut self, k: usize, flags: Flags) -> Result<SpaceResult, SpaceError> {
        if k < 1 {
            return Err(SpaceError::DegreeTooSmall { space: "A", degree: k });
        }
        let (ncols, rows, counts, basis, skipped) = self.a_presentation(k, flags, false)?;
        let group = cokernel_of_rows(ncols, rows, &self.opts)?;
        Ok(self.result(SpaceId::A, k, Grading::Vassiliev, flags, basis, counts, group, skipped))
    }

    /// `A^I_k`: AS, STU and the products; `flags.mod_loops` gives
    /// `A^I_k[m]`.
    pub fn compute_a_indecomposable(&mut self, k: usize, flags: Flags) -> Result<SpaceResult, SpaceError> {
        if k < 2 {
            return Err(SpaceError::DegreeTooSmall { space: "AI", degree: k });
        }
        let (ncols, rows, counts, basis, skipped) = self.a_presentation(k, flags, true)?;
        let group = cokernel_of_rows(ncols, rows, &self.opts)?;
        Ok(self.result(SpaceId::AI, k, Grading::Vassiliev, flags, basis, counts, group, skipped))
    }

    /// `A^I_k[m]`, killing diagrams with at least `m` loops.
    pub fn loop_quotient(&mut self, k: usize, m: usize) -> Result<SpaceResult, SpaceError> {
        self.loop_quotient_with(k, m, Flags::default())
    }

    pub fn loop_quotient_with(&mut self, k: usize, m: usize, flags: Flags) -> Result<SpaceResult, SpaceError> {
        if m < 1 {
            return Err(SpaceError::BadLoopBound);
        }
        self.compute_a_indecomposable(k, Flags { mod_loops: Some(m), ..flags })
    }

    #[allow(clippy::type_complexity)]
    fn a_presentation(
        &mut self,
        k: usize,
        flags: Flags,
        indecomposable: bool,
    ) -> Result<(usize, Vec<Vec<(usize, i64)>>, BTreeMap<Tag, usize>, Vec<CanonicalKey>, usize), SpaceError> {
        let d = self.closed_data(k)?;
        let gens = d.basis.generators();
        let killed_loops = |i: usize| match flags.mod_loops {
            Some(m) if flags.loops_exact => gens[i].degrees.b1 == m,
            Some(m) => gens[i].degrees.b1 >= m,
            None => false,
        };
        let decomposable = |i: usize| indecomposable && gens[i].diagram.is_separated();
        let one_t = |i: usize| !flags.framed && !indecomposable && gens[i].diagram.has_isolated_chord();
        let mut counts = BTreeMap::new();
        let n = gens.len();
        let c_dec = (0..n).filter(|&i| decomposable(i)).count();
        let c_1t = (0..n).filter(|&i| one_t(i)).count();
        let c_loop = (0..n).filter(|&i| killed_loops(i)).count();
        let mut red = Reduced::new(n, |i| decomposable(i) || one_t(i) || killed_loops(i));
        counts.insert(Tag::SelfNeg, d.self_neg.len());
        counts.insert(Tag::Stu, d.stu.len());
        if indecomposable {
            counts.insert(Tag::Decomposable, c_dec);
        } else if !flags.framed {
            counts.insert(Tag::Decomposable1T, c_1t);
        }
        if flags.mod_loops.is_some() {
            counts.insert(Tag::Loops, c_loop);
        }
        red.push_all(d.self_neg.iter().chain(&d.stu));
        let mut skipped = 0;
        if flags.presentation == Presentation::Ihx {
            let basis_keys = d.basis.keys();
            let (ihx, s) = d.ihx()?;
            counts.insert(Tag::Ihx, ihx.len());
            red.push_all(ihx);
            skipped = s;
            let red = red.finish();
            return Ok((red.ncols, red.rows, counts, basis_keys, skipped));
        }
        let keys = d.basis.keys();
        let red = red.finish();
        let _ = &mut skipped;
        Ok((red.ncols, red.rows, counts, keys, skipped))
    }

    /// Rational rank of `A_k` (no loop quotient) or `A^I_k`.
    fn a_rank(&mut self, k: usize, indecomposable: bool, presentation: Presentation) -> Result<usize, SpaceError> {
        let flags = Flags { presentation, ..Flags::default() };
        let (ncols, rows, ..) = self.a_presentation(k, flags, indecomposable)?;
        Ok(ncols - rational_rank_of_rows(ncols, &rows, &self.opts)?.rank)
    }

    pub fn a_rational_rank(&mut self, k: usize, presentation: Presentation) -> Result<usize, SpaceError> {
        self.a_rank(k, false, presentation)
    }

    pub fn ai_rational_rank(&mut self, k: usize) -> Result<usize, SpaceError> {
        self.a_rank(k, true, Presentation::Stu)
    }

    /// Loop quotients assembled into the conjectured splitting of
    /// `K/G_k`: the sum of `X_{k-j}[j]` for `j = 1 .. k-2`.
    pub fn conjecture_group(&mut self, k: usize) -> Result<GradedAbelianGroup, SpaceError> {
        self.conjecture_group_with(k, ConjectureReading::Indecomposable)
    }

    pub fn conjecture_group_with(
        &mut self,
        k: usize,
        reading: ConjectureReading,
    ) -> Result<GradedAbelianGroup, SpaceError> {
        Ok(self
            .conjecture_summands(k, reading)?
            .into_iter()
            .fold(GradedAbelianGroup::zero(), |acc, s| acc.direct_sum(&s.group)))
    }

    /// The individual summands, in order of increasing `j`.
    pub fn conjecture_summands(
        &mut self,
        k: usize,
        reading: ConjectureReading,
    ) -> Result<Vec<SpaceResult>, SpaceError> {
        if k < 3 {
            return Err(SpaceError::DegreeTooSmall { space: "conjecture", degree: k });
        }
        let mut out = Vec::new();
        for j in 1..=k - 2 {
            let flags = Flags { mod_loops: Some(j), ..Flags::default() };
            out.push(match reading {
                ConjectureReading::Indecomposable => self.compute_a_indecomposable(k - j, flags)?,
                ConjectureReading::Full => self.compute_a(k - j, flags)?,
            });
        }
        Ok(out)
    }

    /// Whether the connected diagrams with at least one loop span
    /// `A^I_k ⊗ Q`.
    pub fn spanned_by_connected_loops(&mut self, k: usize) -> Result<bool, SpaceError> {
        let d = self.closed_data(k)?;
        let gens = d.basis.generators();
        let mut red = Reduced::new(gens.len(), |i| {
            let g = &gens[i];
            g.diagram.is_separated() || (g.degrees.b1 >= 1 && g.diagram.dashed().is_connected())
        });
        red.push_all(d.self_neg.iter().chain(&d.stu));
        let red = red.finish();
        Ok(red.ncols == rational_rank_of_rows(red.ncols, &red.rows, &self.opts)?.rank)
    }

    /// Compares `B^v_k ⊗ Q` with `A^I_k ⊗ Q` through the averaging map.
    pub fn chi_rank_check(&mut self, k: usize) -> Result<ChiReport, SpaceError> {
        let open = self.open_data(Grading::Vassiliev, k)?;
        let opts = self.opts;
        let mut bred = Reduced::new(open.basis.len(), |_| false);
        bred.push_all(open.self_neg.iter().chain(&open.ihx));
        let bred = bred.finish();
        let rank_b = bred.ncols - rational_rank_of_rows(bred.ncols, &bred.rows, &opts)?.rank;

        let d = self.closed_data(k)?;
        let gens = d.basis.generators();
        let mut red = Reduced::new(gens.len(), |i| gens[i].diagram.is_separated());
        red.push_all(d.self_neg.iter().chain(&d.stu));
        let red = red.finish();
        let r0 = rational_rank_of_rows(red.ncols, &red.rows, &opts)?.rank;
        let rank_ai = red.ncols - r0;

        // χ of every open basis element, in the reduced closed columns
        let mut chi: Vec<Vec<(usize, i64)>> = Vec::with_capacity(open.basis.len());
        for g in open.basis.generators() {
            let mut terms: BTreeMap<usize, i64> = BTreeMap::new();
            for c in all_closures(&g.diagram) {
                let s = c.canonical();
                let Some(i) = d.basis.position(&s.key) else {
                    return Err(RelationError::MissingGenerator { key: s.key, source_index: 0 }.into());
                };
                if let Some(j) = red.map[i] {
                    *terms.entry(j).or_insert(0) += s.sign.to_i64();
                }
            }
            chi.push(terms.into_iter().filter(|e| e.1 != 0).collect());
        }
        let apply = |row: &[(usize, i64)]| -> Vec<(usize, i64)> {
            let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
            for &(b, c) in row {
                for &(j, v) in &chi[b] {
                    *acc.entry(j).or_insert(0) += c * v;
                }
            }
            acc.into_iter().filter(|e| e.1 != 0).collect()
        };
        let images: Vec<Vec<(usize, i64)>> = bred.rows.iter().map(|r| apply(r)).collect();
        let mut with_images = red.rows.clone();
        with_images.extend(images.iter().cloned());
        let r1 = rational_rank_of_rows(red.ncols, &with_images, &opts)?.rank;
        let well_defined = r1 == r0;
        let mut witness = None;
        if !well_defined {
            for (row, img) in bred.rows.iter().zip(&images) {
                let mut m = red.rows.clone();
                m.push(img.clone());
                if rational_rank_of_rows(red.ncols, &m, &opts)?.rank > r0 {
                    witness = Some(row.clone());
                    break;
                }
            }
        }
        let mut all = with_images;
        all.extend(chi.iter().cloned());
        let r2 = rational_rank_of_rows(red.ncols, &all, &opts)?.rank;
        Ok(ChiReport { degree: k, rank_b, rank_ai, image_rank: r2 - r1, well_defined, witness })
    }

    /// Tests `ρ(D) ≡ (-1)^k D` for every connected closed diagram `D` of
    /// grope degree `k`, modulo relations and diagrams of higher grope
    /// degree, in `A^I ⊗ Q`.
    pub fn rho_symmetry_check(&mut self, k: usize) -> Result<RhoReport, SpaceError> {
        if k < 2 {
            return Err(SpaceError::DegreeTooSmall { space: "rho", degree: k });
        }
        let eps: i64 = if k.is_multiple_of(2) { 1 } else { -1 };
        let opts = self.opts;
        let mut checked = 0;
        let mut failures = Vec::new();
        for v in k.div_ceil(2)..=k {
            let d = self.closed_data(v)?;
            let gens = d.basis.generators();
            let higher = k - v;
            let mut red = Reduced::new(gens.len(), |i| gens[i].diagram.is_separated() || gens[i].degrees.b1 > higher);
            red.push_all(d.self_neg.iter().chain(&d.stu));
            let red = red.finish();
            let targets: Vec<usize> = (0..gens.len())
                .filter(|&i| gens[i].degrees.g == k && gens[i].diagram.dashed().is_connected())
                .collect();
            if targets.is_empty() {
                continue;
            }
            checked += targets.len();
            let diff = |i: usize, e: i64| -> Result<Vec<(usize, i64)>, SpaceError> {
                let r = gens[i].diagram.reverse_circle().canonical();
                let Some(j) = d.basis.position(&r.key) else {
                    return Err(RelationError::MissingGenerator { key: r.key, source_index: i }.into());
                };
                Ok(red.image(&[(j, r.sign.to_i64()), (i, -e)]))
            };
            let r0 = rational_rank_of_rows(red.ncols, &red.rows, &opts)?.rank;
            let holds = |rows: &[Vec<(usize, i64)>]| -> Result<bool, SpaceError> {
                let mut m = red.rows.clone();
                m.extend(rows.iter().cloned());
                Ok(rational_rank_of_rows(red.ncols, &m, &opts)?.rank == r0)
            };
            let all: Vec<Vec<(usize, i64)>> = targets.iter().map(|&i| diff(i, eps)).collect::<Result<_, _>>()?;
            if holds(&all)? {
                continue;
            }
            for (&i, row) in targets.iter().zip(&all) {
                if !holds(core::slice::from_ref(row))? {
                    let opposite = holds(&[diff(i, -eps)?])?;
                    failures.push(RhoFailure {
                        key: gens[i].key.clone(),
                        vassiliev_degree: v,
                        loops: gens[i].degrees.b1,
                        opposite_sign_holds: opposite,
                    });
                }
            }
        }
        Ok(RhoReport { grope_degree: k, checked, failures })
    }

    /// Rank in `A^I_k ⊗ Q` of the span of closed diagrams whose dashed
    /// part is connected with one leg.
    pub fn one_leg_vanishing(&mut self, k: usize) -> Result<OneLegReport, SpaceError> {
        let opts = self.opts;
        let d = self.closed_data(k)?;
        let gens = d.basis.generators();
        let mut red = Reduced::new(gens.len(), |i| gens[i].diagram.is_separated());
        red.push_all(d.self_neg.iter().chain(&d.stu));
        let red = red.finish();
        let targets: Vec<usize> = (0..gens.len())
            .filter(|&i| gens[i].diagram.circle().len() == 1 && gens[i].diagram.dashed().is_connected())
            .collect();
        let r0 = rational_rank_of_rows(red.ncols, &red.rows, &opts)?.rank;
        let mut m = red.rows.clone();
        m.extend(targets.iter().map(|&i| red.image(&[(i, 1)])));
        let r1 = rational_rank_of_rows(red.ncols, &m, &opts)?.rank;
        Ok(OneLegReport { degree: k, one_leg_diagrams: targets.len(), rank: r1 - r0 })
    }

    /// Whether the IHX rows lie in the rational span of the AS and STU
    /// rows over all closed diagrams of degree `k`.
    pub fn stu_implies_ihx(&mut self, k: usize) -> Result<bool, SpaceError> {
        let opts = self.opts;
        let d = self.closed_data(k)?;
        let n = d.basis.len();
        let mut base = Reduced::new(n, |_| false);
        base.push_all(d.self_neg.iter().chain(&d.stu));
        let base = base.finish();
        let r0 = rational_rank_of_rows(n, &base.rows, &opts)?.rank;
        let (ihx, _) = d.ihx()?;
        let mut m = base.rows;
        m.extend(dedupe(ihx.to_vec()).into_iter().map(|r| r.entries));
        Ok(rational_rank_of_rows(n, &m, &opts)?.rank == r0)
    }

    /// Splits `B^g_k ⊗ Q` by Vassiliev degree.
    pub fn bigraded_check(&mut self, k: usize) -> Result<BigradedReport, SpaceError> {
        let d = self.open_data(Grading::Grope, k)?;
        let opts = self.opts;
        let mut full = Reduced::new(d.basis.len(), |_| false);
        full.push_all(d.self_neg.iter().chain(&d.ihx));
        let full = full.finish();
        let total_rank = full.ncols - rational_rank_of_rows(full.ncols, &full.rows, &opts)?.rank;
        let gens = d.basis.generators();
        let mut by_v: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, g) in gens.iter().enumerate() {
            by_v.entry(g.degrees.v).or_default().push(i);
        }
        let mut mixed_rows = 0;
        let mut pieces = Vec::new();
        for (&v, cols) in &by_v {
            let inside = |c: usize| gens[c].degrees.v == v;
            let mut red = Reduced::new(gens.len(), |c| !inside(c));
            for r in d.self_neg.iter().chain(&d.ihx) {
                if gens[r.source].degrees.v != v {
                    continue;
                }
                if r.entries.iter().any(|&(c, _)| !inside(c)) {
                    mixed_rows += 1;
                }
                red.push_all(core::iter::once(r));
            }
            let red = red.finish();
            let rank = red.ncols - rational_rank_of_rows(red.ncols, &red.rows, &opts)?.rank;
            debug_assert_eq!(red.ncols, cols.len());
            pieces.push((v, k - v, rank));
        }
        Ok(BigradedReport { grope_degree: k, total_rank, pieces, mixed_rows })
    }

    /// Degree homogeneity of the rows of `B^v_k` and `B^g_k`.
    pub fn open_homogeneity(&mut self, grading: Grading, k: usize) -> Result<HomogeneityReport, SpaceError> {
        let d = self.open_data(grading, k)?;
        let name = if grading == Grading::Vassiliev { "B^v" } else { "B^g" };
        let mut rep = HomogeneityReport { space: format!("{name}_{k}"), ..Default::default() };
        rep.record(&d.basis, &d.self_neg);
        rep.record(&d.basis, &d.ihx);
        Ok(rep)
    }

    /// Degree homogeneity of the rows over the closed diagrams of degree `k`.
    pub fn closed_homogeneity(&mut self, k: usize) -> Result<HomogeneityReport, SpaceError> {
        let d = self.closed_data(k)?;
        let mut rep = HomogeneityReport { space: format!("A_{k}"), ..Default::default() };
        let basis = d.basis.clone();
        rep.record(&basis, &d.self_neg);
        rep.record(&basis, &d.stu);
        let (ihx, _) = d.ihx()?;
        rep.record(&basis, ihx);
        Ok(rep)
    }

    /// The basis of a space without computing its group.
    pub fn basis_of(&mut self, space: SpaceId, k: usize) -> Result<BasisListing, SpaceError> {
        match space {
            SpaceId::Bv | SpaceId::Bg => {
                let grading = if space == SpaceId::Bv { Grading::Vassiliev } else { Grading::Grope };
                Ok(BasisListing::Open(self.open_data(grading, k)?.basis.generators().to_vec()))
            }
            SpaceId::A | SpaceId::AI => Ok(BasisListing::Closed(self.closed_data(k)?.basis.generators().to_vec())),
        }
    }
}

#[derive(Clone, Debug)]
pub enum BasisListing {
    Open(Vec<Generator<UniTrivalentGraph>>),
    Closed(Vec<Generator<ClosedDiagram>>),
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> GradedAbelianGroup {
        GradedAbelianGroup::free(1)
    }

    fn z2() -> GradedAbelianGroup {
        GradedAbelianGroup::from_cyclic(0, &[2])
    }

    #[test]
    fn open_groups_in_degree_two() {
        let mut e = Engine::new();
        assert_eq!(e.compute_b(Grading::Grope, 2).unwrap().group, z2());
        assert_eq!(e.compute_b(Grading::Vassiliev, 2).unwrap().group.rational_dim(), 1);
        assert!(matches!(e.compute_b(Grading::Vassiliev, 1), Err(SpaceError::DegreeTooSmall { .. })));
    }

    #[test]
    fn closed_groups_in_low_degree() {
        let mut e = Engine::new();
        assert!(e.compute_a(1, Flags::default()).unwrap().group.is_trivial());
        assert_eq!(e.compute_a(1, Flags { framed: true, ..Flags::default() }).unwrap().group, z());
        assert_eq!(e.compute_a(2, Flags::default()).unwrap().group.rational_dim(), 1);
        assert_eq!(e.compute_a_indecomposable(2, Flags::default()).unwrap().group, z());
        assert_eq!(e.compute_a_indecomposable(3, Flags::default()).unwrap().group, z());
    }

    #[test]
    fn loop_quotients() {
        let mut e = Engine::new();
        assert_eq!(e.loop_quotient(2, 1).unwrap().group, z2());
        assert!(e.loop_quotient(3, 1).unwrap().group.is_trivial());
        assert_eq!(e.loop_quotient(3, 2).unwrap().group, z2());
        assert!(matches!(e.loop_quotient(3, 0), Err(SpaceError::BadLoopBound)));
    }

    #[test]
    fn flags_hash_is_stable() {
        let a = Flags::default();
        let b = Flags { mod_loops: Some(1), ..a };
        assert_eq!(a.hash().len(), 16);
        assert_ne!(a.hash(), b.hash());
        assert_eq!(label(SpaceId::AI, 3, &b), "A^I_3[1]");
    }

    #[test]
    fn results_are_reproducible() {
        let r1 = Engine::new().loop_quotient(3, 2).unwrap();
        let r2 = Engine::new().loop_quotient(3, 2).unwrap();
        assert_eq!(r1, r2);
        assert_eq!(r1.content_digest(), r2.content_digest());
    }

    #[test]
    fn chi_in_low_degree() {
        let mut e = Engine::new();
        for k in 2..=3 {
            let r = e.chi_rank_check(k).unwrap();
            assert!(r.passed(), "{r:?}");
        }
        assert_eq!(e.chi_rank_check(2).unwrap().rank_b, 1);
    }
}
