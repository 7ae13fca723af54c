//! Exact linear algebra over the rationals, sized for sparse incidence-style
//! matrices coming from cell complexes.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::lattice::Rat;

/// A sparse matrix over Q. Rows are kept sorted by column index.
/// A row-per-domain-basis-vector convention is used throughout: the matrix
/// of a linear map C -> D has one row per basis vector of C.
#[derive(Clone, Debug, Default)]
pub struct SparseMat {
    ncols: usize,
    rows: Vec<Vec<(usize, Rat)>>,
}

fn axpy(target: &mut Vec<(usize, Rat)>, factor: &Rat, source: &[(usize, Rat)]) {
    // target += factor * source, both sorted by column.
    let mut out = Vec::with_capacity(target.len() + source.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() || j < source.len() {
        match (target.get(i), source.get(j)) {
            (Some((ci, vi)), Some((cj, vj))) => {
                if ci < cj {
                    out.push((*ci, vi.clone()));
                    i += 1;
                } else if cj < ci {
                    out.push((*cj, vj * factor));
                    j += 1;
                } else {
                    let v = vi + vj * factor;
                    if !v.is_zero() {
                        out.push((*ci, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
            (Some((ci, vi)), None) => {
                out.push((*ci, vi.clone()));
                i += 1;
            }
            (None, Some((cj, vj))) => {
                out.push((*cj, vj * factor));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    *target = out;
}

impl SparseMat {
    pub fn new(ncols: usize) -> Self {
        SparseMat {
            ncols,
            rows: Vec::new(),
        }
    }

    pub fn with_rows(nrows: usize, ncols: usize) -> Self {
        SparseMat {
            ncols,
            rows: alloc::vec![Vec::new(); nrows],
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Append a row given as (column, value) pairs in any order.
    pub fn push_row(&mut self, mut entries: Vec<(usize, Rat)>) {
        entries.retain(|(_, v)| !v.is_zero());
        entries.sort_by_key(|(c, _)| *c);
        for w in entries.windows(2) {
            assert!(w[0].0 != w[1].0, "duplicate column in row");
        }
        for (c, _) in &entries {
            assert!(*c < self.ncols);
        }
        self.rows.push(entries);
    }

    /// Add `value` to the (row, col) entry.
    pub fn add_entry(&mut self, row: usize, col: usize, value: Rat) {
        assert!(col < self.ncols && row < self.rows.len());
        if value.is_zero() {
            return;
        }
        let r = &mut self.rows[row];
        match r.binary_search_by_key(&col, |(c, _)| *c) {
            Ok(i) => {
                let v = &r[i].1 + value;
                if v.is_zero() {
                    r.remove(i);
                } else {
                    r[i].1 = v;
                }
            }
            Err(i) => r.insert(i, (col, value)),
        }
    }

    pub fn row(&self, i: usize) -> &[(usize, Rat)] {
        &self.rows[i]
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    /// Matrix product under the row convention: (self * rhs) represents
    /// "apply self, then rhs".
    pub fn mul(&self, rhs: &SparseMat) -> SparseMat {
        assert_eq!(self.ncols, rhs.nrows());
        let mut out = SparseMat::new(rhs.ncols);
        for r in &self.rows {
            let mut acc: Vec<(usize, Rat)> = Vec::new();
            for (c, v) in r {
                axpy(&mut acc, v, &rhs.rows[*c]);
            }
            out.rows.push(acc);
        }
        out
    }

    /// Rank by fraction-exact Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut pivots: BTreeMap<usize, Vec<(usize, Rat)>> = BTreeMap::new();
        for row in &self.rows {
            let mut r = row.clone();
            loop {
                let Some((lead_col, lead_val)) = r.first().cloned() else {
                    break;
                };
                if let Some(p) = pivots.get(&lead_col) {
                    let factor = -lead_val;
                    axpy(&mut r, &factor, p);
                } else {
                    // Normalize so the pivot entry is 1.
                    let inv = Rat::new(
                        *lead_val.denom(),
                        *lead_val.numer(),
                    );
                    for (_, v) in r.iter_mut() {
                        *v = &*v * &inv;
                    }
                    pivots.insert(lead_col, r);
                    break;
                }
            }
        }
        pivots.len()
    }
}

/// A finite cochain complex over Q, stored as dimensions per degree plus the
/// differentials d_i : C^i -> C^{i+1} (row convention).
#[derive(Clone, Debug, Default)]
pub struct Complex {
    pub dims: BTreeMap<i32, usize>,
    pub maps: BTreeMap<i32, SparseMat>,
}

impl Complex {
    pub fn dim(&self, degree: i32) -> usize {
        self.dims.get(&degree).copied().unwrap_or(0)
    }

    /// Check d o d = 0 (cheap at desk scale; used after every constructor).
    pub fn check_differential(&self) -> bool {
        for (i, d) in &self.maps {
            if let Some(next) = self.maps.get(&(i + 1)) {
                if d.ncols() == next.nrows() && !d.mul(next).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// Exact cohomology dimensions per degree.
    pub fn cohomology(&self) -> BTreeMap<i32, usize> {
        let mut ranks: BTreeMap<i32, usize> = BTreeMap::new();
        for (i, d) in &self.maps {
            if d.nrows() > 0 && d.ncols() > 0 {
                ranks.insert(*i, d.rank());
            }
        }
        let mut h = BTreeMap::new();
        for (i, n) in &self.dims {
            let r_out = ranks.get(i).copied().unwrap_or(0);
            let r_in = ranks.get(&(i - 1)).copied().unwrap_or(0);
            let dim = n - r_out - r_in;
            if dim > 0 {
                h.insert(*i, dim);
            }
        }
        h
    }

    /// Alternating sum of dimensions (equals the alternating sum of
    /// cohomology dimensions).
    pub fn euler(&self) -> i64 {
        self.dims
            .iter()
            .map(|(i, n)| if i % 2 == 0 { *n as i64 } else { -(*n as i64) })
            .sum()
    }

    pub fn is_acyclic(&self) -> bool {
        self.cohomology().is_empty()
    }

    pub fn shift(&self, by: i32) -> Complex {
        // Shift [by]: degree i of the result is degree i + by of self.
        // Differentials of odd shifts pick up a sign, which does not affect
        // any dimension count; keep them as-is up to sign convention.
        let mut dims = BTreeMap::new();
        for (i, n) in &self.dims {
            dims.insert(i - by, *n);
        }
        let mut maps = BTreeMap::new();
        for (i, d) in &self.maps {
            maps.insert(i - by, d.clone());
        }
        Complex { dims, maps }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::rat;
    use alloc::vec;

    #[test]
    fn rank_of_small_matrices() {
        let mut m = SparseMat::new(3);
        m.push_row(vec![(0, rat(1)), (1, rat(2))]);
        m.push_row(vec![(1, rat(1)), (2, rat(1))]);
        m.push_row(vec![(0, rat(1)), (1, rat(3)), (2, rat(1))]);
        assert_eq!(m.rank(), 2);

        let mut id = SparseMat::new(2);
        id.push_row(vec![(0, rat(1))]);
        id.push_row(vec![(1, rat(1))]);
        assert_eq!(id.rank(), 2);

        assert_eq!(SparseMat::new(5).rank(), 0);
    }

    #[test]
    fn circle_cochain_cohomology() {
        // Two vertices, two arcs: simplicial circle. H^0 = H^1 = 1.
        let mut d0 = SparseMat::new(2);
        d0.push_row(vec![(0, rat(1)), (1, rat(-1))]);
        d0.push_row(vec![(0, rat(-1)), (1, rat(1))]);
        let mut c = Complex::default();
        c.dims.insert(0, 2);
        c.dims.insert(1, 2);
        c.maps.insert(0, d0);
        assert!(c.check_differential());
        let h = c.cohomology();
        assert_eq!(h.get(&0), Some(&1));
        assert_eq!(h.get(&1), Some(&1));
        assert_eq!(c.euler(), 0);
    }
}
