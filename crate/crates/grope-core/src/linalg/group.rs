use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;

/// A finitely generated abelian group `Z^free_rank ⊕ Z/d1 ⊕ ... ⊕ Z/dr`
/// with `d1 | d2 | ... | dr` and every `di >= 2`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GradedAbelianGroup {
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

impl GradedAbelianGroup {
    pub fn zero() -> Self {
        GradedAbelianGroup::default()
    }

    pub fn free(rank: usize) -> Self {
        GradedAbelianGroup { free_rank: rank, torsion: Vec::new() }
    }

    /// The group `Z^free_rank ⊕ ⊕ Z/c` for arbitrary cyclic orders `c`,
    /// brought into invariant factor form. Orders 0 count as free
    /// summands and orders 1 are dropped.
    pub fn from_cyclic(free_rank: usize, orders: &[u64]) -> Self {
        let mut free = free_rank;
        let mut d: Vec<u64> = Vec::new();
        for &o in orders {
            match o {
                0 => free += 1,
                1 => {}
                o => d.push(o),
            }
        }
        // pairwise (gcd, lcm) sweeps give a divisibility chain
        for i in 0..d.len() {
            for j in i + 1..d.len() {
                let g = d[i].gcd(&d[j]);
                let l = d[i] / g * d[j];
                d[i] = g;
                d[j] = l;
            }
        }
        d.retain(|&x| x != 1);
        GradedAbelianGroup { free_rank: free, torsion: d }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn direct_sum(&self, other: &GradedAbelianGroup) -> GradedAbelianGroup {
        let mut orders = self.torsion.clone();
        orders.extend_from_slice(&other.torsion);
        GradedAbelianGroup::from_cyclic(self.free_rank + other.free_rank, &orders)
    }

    /// Whether the divisibility chain invariant holds.
    pub fn is_normalized(&self) -> bool {
        self.torsion.iter().all(|&d| d >= 2) && self.torsion.windows(2).all(|w| w[1] % w[0] == 0)
    }

    /// Dimension after tensoring with the rationals.
    pub fn rational_dim(&self) -> usize {
        self.free_rank
    }
}

impl fmt::Display for GradedAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(alloc::format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(alloc::format!("Z/{d}"));
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" ⊕ "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    #[test]
    fn normal_form() {
        let g = GradedAbelianGroup::from_cyclic(0, &[6, 4]);
        assert_eq!(g.torsion, vec![2, 12]);
        let g = GradedAbelianGroup::from_cyclic(1, &[2, 3, 0, 1]);
        assert_eq!((g.free_rank, g.torsion.clone()), (2, vec![6]));
        assert!(g.is_normalized());
    }

    #[test]
    fn sums_and_display() {
        let z = GradedAbelianGroup::free(1);
        let t = GradedAbelianGroup::from_cyclic(0, &[2]);
        assert_eq!(z.direct_sum(&t).to_string(), "Z ⊕ Z/2");
        assert_eq!(GradedAbelianGroup::zero().to_string(), "0");
        assert_eq!(t.direct_sum(&GradedAbelianGroup::from_cyclic(0, &[3])).torsion, vec![6]);
    }
}
