//! The upstairs sheaf calculus: finite complexes of extension-by-zero
//! constant sheaves on locally closed polyhedra ("blocks") in M_R, with
//! exact hom, section and microlocal-stalk computations.
//!
//! Homs are computed through compactly supported cochains and duality:
//! Hom^i(F, G) is the dual of H^{-i} of the cellular RGamma_c complex of
//! F (x) DG on the arrangement generated by all walls involved. The
//! cellular cochain of a finite line arrangement (including its unbounded
//! cells) computes RGamma_c exactly, so no truncation window ever enters.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::arrangement::{AffineArrangement, Line};
use crate::lattice::{rat, ratio, LatticeVector, Rat, RatPoint};
use crate::linalg::{Complex, SparseMat};
use crate::polyhedra::{HalfSpace, LCPolyhedron};

/// One block: the constant sheaf on a locally closed polyhedron, placed in
/// a single cohomological degree.
#[derive(Clone, Debug)]
pub struct Block {
    pub degree: i32,
    pub support: LCPolyhedron,
}

/// A scalar multiple of the canonical cellwise map between two blocks in
/// adjacent degrees (degree(to) = degree(from) + 1).
#[derive(Clone, Debug)]
pub struct BlockMap {
    pub from: usize,
    pub to: usize,
    pub scalar: Rat,
}

/// A finite complex of blocks.
#[derive(Clone, Debug, Default)]
pub struct BlockComplex {
    pub rank: usize,
    pub blocks: Vec<Block>,
    pub maps: Vec<BlockMap>,
}

impl BlockComplex {
    pub fn zero(rank: usize) -> Self {
        BlockComplex {
            rank,
            blocks: Vec::new(),
            maps: Vec::new(),
        }
    }

    /// A single block in degree 0.
    pub fn constant_on(z: LCPolyhedron) -> Self {
        let rank = z.rank();
        if z.is_empty() {
            return BlockComplex::zero(rank);
        }
        BlockComplex {
            rank,
            blocks: vec![Block {
                degree: 0,
                support: z,
            }],
            maps: Vec::new(),
        }
    }

    pub fn is_zero_object(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn translate(&self, m: &LatticeVector) -> BlockComplex {
        BlockComplex {
            rank: self.rank,
            blocks: self
                .blocks
                .iter()
                .map(|b| Block {
                    degree: b.degree,
                    support: b.support.translate(m),
                })
                .collect(),
            maps: self.maps.clone(),
        }
    }

    /// Homological shift [k]: degrees drop by k.
    pub fn shift(&self, k: i32) -> BlockComplex {
        BlockComplex {
            rank: self.rank,
            blocks: self
                .blocks
                .iter()
                .map(|b| Block {
                    degree: b.degree - k,
                    support: b.support.clone(),
                })
                .collect(),
            maps: self.maps.clone(),
        }
    }

    pub fn direct_sum(&self, other: &BlockComplex) -> BlockComplex {
        let offset = self.blocks.len();
        let mut blocks = self.blocks.clone();
        blocks.extend(other.blocks.iter().cloned());
        let mut maps = self.maps.clone();
        maps.extend(other.maps.iter().map(|m| BlockMap {
            from: m.from + offset,
            to: m.to + offset,
            scalar: m.scalar.clone(),
        }));
        BlockComplex {
            rank: self.rank,
            blocks,
            maps,
        }
    }

    /// Mapping cone of a blockwise chain map phi: self -> other, given as
    /// (from-block in self, to-block in other, scalar) triples.
    pub fn cone_of(&self, other: &BlockComplex, phi: &[(usize, usize, Rat)]) -> BlockComplex {
        // Cone^n = self^{n+1} (+) other^n.
        let mut blocks: Vec<Block> = self
            .blocks
            .iter()
            .map(|b| Block {
                degree: b.degree - 1,
                support: b.support.clone(),
            })
            .collect();
        let offset = blocks.len();
        blocks.extend(other.blocks.iter().cloned());
        let mut maps: Vec<BlockMap> = self
            .maps
            .iter()
            .map(|m| BlockMap {
                from: m.from,
                to: m.to,
                scalar: -m.scalar.clone(),
            })
            .collect();
        maps.extend(other.maps.iter().map(|m| BlockMap {
            from: m.from + offset,
            to: m.to + offset,
            scalar: m.scalar.clone(),
        }));
        for (f, t, s) in phi {
            maps.push(BlockMap {
                from: *f,
                to: *t + offset,
                scalar: s.clone(),
            });
        }
        BlockComplex {
            rank: self.rank,
            blocks,
            maps,
        }
    }

    /// All wall lines of all blocks.
    fn lines(&self) -> Vec<Line> {
        let mut out = Vec::new();
        for b in &self.blocks {
            for h in b.support.halfspaces() {
                out.push(Line::new(h.normal.clone(), rat(h.level)));
            }
        }
        out
    }

    /// Does the stored data satisfy d^2 = 0 cellwise?
    pub fn check_differential(&self) -> bool {
        let arr = AffineArrangement::build(self.rank, &self.lines());
        let mut by_from: BTreeMap<usize, Vec<&BlockMap>> = BTreeMap::new();
        for m in &self.maps {
            by_from.entry(m.from).or_default().push(m);
        }
        for m1 in &self.maps {
            let Some(nexts) = by_from.get(&m1.to) else {
                continue;
            };
            let mut targets: Vec<usize> = nexts.iter().map(|m| m.to).collect();
            targets.sort_unstable();
            targets.dedup();
            for final_to in targets {
                for cell in &arr.cells {
                    let p = &cell.sample;
                    if !self.blocks[m1.from].support.contains(p)
                        || !self.blocks[final_to].support.contains(p)
                    {
                        continue;
                    }
                    let mut total = Rat::zero();
                    for m2 in nexts {
                        if m2.to == final_to && self.blocks[m1.to].support.contains(p) {
                            total += &m1.scalar * &m2.scalar;
                        }
                    }
                    // Other length-2 paths from m1.from to final_to also
                    // land here; sum over all of them.
                    for mm1 in &self.maps {
                        if mm1.from != m1.from || (mm1.from == m1.from && mm1.to == m1.to) {
                            continue;
                        }
                        if !self.blocks[mm1.to].support.contains(p) {
                            continue;
                        }
                        if let Some(nn) = by_from.get(&mm1.to) {
                            for m2 in nn {
                                if m2.to == final_to {
                                    total += &mm1.scalar * &m2.scalar;
                                }
                            }
                        }
                    }
                    if !total.is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Total Hom^*(F, G) dimensions per degree.
pub fn hom(f: &BlockComplex, g: &BlockComplex) -> BTreeMap<i32, usize> {
    if f.is_zero_object() || g.is_zero_object() {
        return BTreeMap::new();
    }
    let t = gamma_c_tensor_dual(f, g);
    let h = t.cohomology();
    h.into_iter().map(|(n, d)| (-n, d)).collect()
}

/// Hom^*(F translated by m, G) for every m in the window; only nonzero
/// tables are returned.
pub fn hom_graded(
    f: &BlockComplex,
    g: &BlockComplex,
    window: &[LatticeVector],
) -> BTreeMap<LatticeVector, BTreeMap<i32, usize>> {
    let mut out = BTreeMap::new();
    for m in window {
        let ft = f.translate(m);
        let h = hom(&ft, g);
        if !h.is_empty() {
            out.insert(m.clone(), h);
        }
    }
    out
}

/// RGamma(S; G) for an open polyhedral region S.
pub fn sections_over_open(g: &BlockComplex, s: &LCPolyhedron) -> BTreeMap<i32, usize> {
    hom(&BlockComplex::constant_on(s.clone()), g)
}

/// The cellular RGamma_c complex of F (x) DG.
fn gamma_c_tensor_dual(f: &BlockComplex, g: &BlockComplex) -> Complex {
    let rank = f.rank;
    assert_eq!(rank, g.rank);
    // Within G, maps must connect equidimensional blocks: the dual of a map
    // between blocks of different dimension is not a chain-level map.
    for m in &g.maps {
        assert_eq!(
            g.blocks[m.from].support.dim(),
            g.blocks[m.to].support.dim(),
            "G-side maps must connect equidimensional blocks"
        );
    }

    let mut lines = f.lines();
    lines.extend(g.lines());
    let arr = AffineArrangement::build(rank, &lines);

    // Slot: (f block, g block, cell) with the cell inside
    // supp(F) /\ flip(supp G).
    // Total degree: dim(cell) + deg_f - deg_g - dim(supp G).
    let g_flips: Vec<LCPolyhedron> = g.blocks.iter().map(|b| b.support.flip()).collect();
    let mut slots: Vec<(usize, usize, usize)> = Vec::new();
    let mut slot_id: BTreeMap<(usize, usize, usize), usize> = BTreeMap::new();
    for (bf, fb) in f.blocks.iter().enumerate() {
        for (bg, _) in g.blocks.iter().enumerate() {
            for (c, cell) in arr.cells.iter().enumerate() {
                if fb.support.contains(&cell.sample) && g_flips[bg].contains(&cell.sample) {
                    slot_id.insert((bf, bg, c), slots.len());
                    slots.push((bf, bg, c));
                }
            }
        }
    }
    let degree_of = |bf: usize, bg: usize, c: usize| -> i32 {
        arr.cells[c].dim as i32 + f.blocks[bf].degree
            - g.blocks[bg].degree
            - g.blocks[bg].support.dim().unwrap_or(0) as i32
    };

    let mut builder = ComplexBuilder::new();
    for (i, (bf, bg, c)) in slots.iter().enumerate() {
        builder.declare(i, degree_of(*bf, *bg, *c));
    }

    // (alpha) cellular cochain differential within a block pair.
    for (lo, hi, sign) in &arr.incidences {
        for (bf, _) in f.blocks.iter().enumerate() {
            for (bg, _) in g.blocks.iter().enumerate() {
                if let (Some(a), Some(b)) =
                    (slot_id.get(&(bf, bg, *lo)), slot_id.get(&(bf, bg, *hi)))
                {
                    builder.add(*a, *b, rat(*sign as i128));
                }
            }
        }
    }
    // (beta) F-side maps, weighted by (-1)^{dim cell}.
    for m in &f.maps {
        for (bg, _) in g.blocks.iter().enumerate() {
            for (c, cell) in arr.cells.iter().enumerate() {
                if let (Some(a), Some(b)) =
                    (slot_id.get(&(m.from, bg, c)), slot_id.get(&(m.to, bg, c)))
                {
                    let sgn = if cell.dim % 2 == 0 { rat(1) } else { rat(-1) };
                    builder.add(*a, *b, &m.scalar * sgn);
                }
            }
        }
    }
    // (gamma) dualized G-side maps (reversed), weighted by
    // (-1)^{dim cell + deg_f}.
    for m in &g.maps {
        for (bf, fb) in f.blocks.iter().enumerate() {
            for (c, cell) in arr.cells.iter().enumerate() {
                if let (Some(a), Some(b)) =
                    (slot_id.get(&(bf, m.to, c)), slot_id.get(&(bf, m.from, c)))
                {
                    let e = cell.dim as i32 + fb.degree;
                    let sgn = if e.rem_euclid(2) == 0 { rat(1) } else { rat(-1) };
                    builder.add(*a, *b, &m.scalar * sgn);
                }
            }
        }
    }

    let comp = builder.finish();
    debug_assert!(comp.check_differential(), "RGamma_c total complex d^2 != 0");
    comp
}

/// Helper assembling a Complex from slots declared with degrees and
/// entries added between slots of adjacent degrees.
struct ComplexBuilder {
    degrees: BTreeMap<usize, i32>,
    index: BTreeMap<usize, usize>,
    sizes: BTreeMap<i32, usize>,
    entries: Vec<(usize, usize, Rat)>,
}

impl ComplexBuilder {
    fn new() -> Self {
        ComplexBuilder {
            degrees: BTreeMap::new(),
            index: BTreeMap::new(),
            sizes: BTreeMap::new(),
            entries: Vec::new(),
        }
    }

    fn declare(&mut self, slot: usize, degree: i32) {
        let k = self.sizes.entry(degree).or_insert(0);
        self.index.insert(slot, *k);
        *k += 1;
        self.degrees.insert(slot, degree);
    }

    fn add(&mut self, from: usize, to: usize, v: Rat) {
        debug_assert_eq!(self.degrees[&from] + 1, self.degrees[&to]);
        self.entries.push((from, to, v));
    }

    fn finish(self) -> Complex {
        let mut comp = Complex::default();
        for (n, k) in &self.sizes {
            comp.dims.insert(*n, *k);
        }
        let mut mats: BTreeMap<i32, SparseMat> = BTreeMap::new();
        for (n, k) in &self.sizes {
            let next = self.sizes.get(&(n + 1)).copied().unwrap_or(0);
            mats.insert(*n, SparseMat::with_rows(*k, next));
        }
        for (from, to, v) in self.entries {
            let n = self.degrees[&from];
            let row = self.index[&from];
            let col = self.index[&to];
            mats.get_mut(&n).unwrap().add_entry(row, col, v);
        }
        comp.maps = mats;
        comp
    }
}

/// The microlocal stalk of G at (p, xi): dims per degree of
/// Cone(Gamma(B; G) -> Gamma(B /\ {f < 0}; G))[-1] for a small polyhedral
/// ball B around p and linear f with df = xi vanishing at p.
pub fn microstalk(g: &BlockComplex, p: &RatPoint, xi: &LatticeVector) -> BTreeMap<i32, usize> {
    assert!(!xi.is_zero(), "microlocal stalk needs a nonzero covector");
    let ball = small_ball(g, p);
    let half = ball.intersect(&half_space_strictly_below(xi, p));
    cone_dims_of_inclusion(g, &half, &ball)
}

/// H^{-n}(Cone(T_{inner} -> T_{outer})) where T_X := RGamma_c(C_X (x) DG),
/// built on one shared arrangement so the inclusion is basis-aligned.
/// These are exactly the dims of Cone(Hom(C_outer,G) -> Hom(C_inner,G))[-1].
fn cone_dims_of_inclusion(
    g: &BlockComplex,
    inner: &LCPolyhedron,
    outer: &LCPolyhedron,
) -> BTreeMap<i32, usize> {
    let rank = g.rank;
    let mut lines = g.lines();
    for h in inner.halfspaces() {
        lines.push(Line::new(h.normal.clone(), rat(h.level)));
    }
    for h in outer.halfspaces() {
        lines.push(Line::new(h.normal.clone(), rat(h.level)));
    }
    let arr = AffineArrangement::build(rank, &lines);

    let g_flips: Vec<LCPolyhedron> = g.blocks.iter().map(|b| b.support.flip()).collect();
    // parts: 0 = inner copy (shifted up by one in the cone), 1 = outer.
    let mut slots: Vec<(usize, usize, u8)> = Vec::new();
    let mut slot_id: BTreeMap<(usize, usize, u8), usize> = BTreeMap::new();
    for (bg, _) in g.blocks.iter().enumerate() {
        for (c, cell) in arr.cells.iter().enumerate() {
            if !g_flips[bg].contains(&cell.sample) {
                continue;
            }
            if inner.contains(&cell.sample) {
                slot_id.insert((bg, c, 0), slots.len());
                slots.push((bg, c, 0));
            }
            if outer.contains(&cell.sample) {
                slot_id.insert((bg, c, 1), slots.len());
                slots.push((bg, c, 1));
            }
        }
    }
    // Cone(iota: T_inner -> T_outer)^n = T_inner^{n+1} (+) T_outer^n, so an
    // inner slot of T-degree m lives in cone degree m - 1.
    let degree_of = |bg: usize, c: usize, part: u8| -> i32 {
        let base = arr.cells[c].dim as i32
            - g.blocks[bg].degree
            - g.blocks[bg].support.dim().unwrap_or(0) as i32;
        if part == 0 {
            base - 1
        } else {
            base
        }
    };
    let mut builder = ComplexBuilder::new();
    for (i, (bg, c, part)) in slots.iter().enumerate() {
        builder.declare(i, degree_of(*bg, *c, *part));
    }
    for part in [0u8, 1u8] {
        let flip = if part == 0 { rat(-1) } else { rat(1) };
        for (lo, hi, sign) in &arr.incidences {
            for (bg, _) in g.blocks.iter().enumerate() {
                if let (Some(a), Some(b)) =
                    (slot_id.get(&(bg, *lo, part)), slot_id.get(&(bg, *hi, part)))
                {
                    builder.add(*a, *b, rat(*sign as i128) * &flip);
                }
            }
        }
        for m in &g.maps {
            for (c, cell) in arr.cells.iter().enumerate() {
                if let (Some(a), Some(b)) = (
                    slot_id.get(&(m.to, c, part)),
                    slot_id.get(&(m.from, c, part)),
                ) {
                    let sgn = if cell.dim % 2 == 0 { rat(1) } else { rat(-1) };
                    builder.add(*a, *b, &m.scalar * sgn * &flip);
                }
            }
        }
    }
    // Connecting map: identity on matching (block, cell) slots.
    for (bg, _) in g.blocks.iter().enumerate() {
        for c in 0..arr.cells.len() {
            if let (Some(a), Some(b)) = (slot_id.get(&(bg, c, 0)), slot_id.get(&(bg, c, 1))) {
                builder.add(*a, *b, rat(1));
            }
        }
    }
    let comp = builder.finish();
    debug_assert!(comp.check_differential(), "microstalk cone d^2 != 0");
    let h = comp.cohomology();
    h.into_iter().map(|(n, d)| (-n, d)).collect()
}

/// An open axis-aligned box around p small enough to meet only the walls
/// of G passing through p.
fn small_ball(g: &BlockComplex, p: &RatPoint) -> LCPolyhedron {
    let rank = g.rank;
    let mut delta = rat(1);
    for b in &g.blocks {
        for h in b.support.halfspaces() {
            let v = h.normal.dot_rat(p) - rat(h.level);
            if !v.is_zero() {
                let n1: i128 = h.normal.coords().iter().map(|c| c.abs()).sum();
                let d = v.abs() / rat(n1);
                if d < delta {
                    delta = d;
                }
            }
        }
    }
    let half = delta * ratio(1, 2);
    let mut halves = Vec::new();
    for i in 0..rank {
        let mut e = vec![0i128; rank];
        e[i] = 1;
        let ei = LatticeVector::new(e);
        let lo = p.coord(i) - &half;
        let hi = p.coord(i) + &half;
        halves.push(rational_halfspace(&ei, &lo, true));
        halves.push(rational_halfspace(&ei.neg(), &(-hi), true));
    }
    LCPolyhedron::from_halfspaces(rank, halves)
}

/// {m : <m, n> >(=) level} with a rational level, encoded by scaling the
/// normal (polyhedron levels are integers).
fn rational_halfspace(n: &LatticeVector, level: &Rat, strict: bool) -> HalfSpace {
    let den = *level.denom();
    HalfSpace {
        normal: n.scale(den),
        level: *level.numer(),
        strict,
    }
}

fn half_space_strictly_below(xi: &LatticeVector, p: &RatPoint) -> LCPolyhedron {
    let level = xi.dot_rat(p);
    // <m, xi> < level  <=>  <m, -xi> > -level.
    let h = rational_halfspace(&xi.neg(), &(-level), true);
    LCPolyhedron::from_halfspaces(xi.rank(), vec![h])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::{corpus, polar_dual, Cone};
    use crate::lattice::ratio;

    fn lv(c: &[i128]) -> LatticeVector {
        LatticeVector::new(c.to_vec())
    }

    fn hs(n: &[i128], level: i128, strict: bool) -> HalfSpace {
        HalfSpace::new(lv(n), level, strict)
    }

    fn theta_block(cone: &Cone) -> BlockComplex {
        BlockComplex::constant_on(polar_dual(cone, true))
    }

    #[test]
    fn hom_formula_instances_p2() {
        // Hom(Theta'(sigma), Theta'(tau))_m is one-dimensional in degree 0
        // exactly for m in the dual of the face cone tau when tau is a face
        // of sigma, and zero otherwise.
        let fan = corpus::p2();
        let mut window = Vec::new();
        for a in -3i128..=3 {
            for b in -3i128..=3 {
                window.push(lv(&[a, b]));
            }
        }
        for sigma in fan.cones() {
            for tau in fan.cones() {
                let f = theta_block(sigma);
                let g = theta_block(tau);
                let table = hom_graded(&f, &g, &window);
                for m in &window {
                    let got = table.get(m).cloned().unwrap_or_default();
                    if sigma.has_face(tau) && polar_dual(tau, false).contains_lattice(m) {
                        assert_eq!(got.get(&0), Some(&1), "s {sigma:?} t {tau:?} m {m:?}");
                        assert_eq!(got.len(), 1);
                    } else {
                        assert!(got.is_empty(), "s {sigma:?} t {tau:?} m {m:?}: {got:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn sections_of_constant_sheaves() {
        // RGamma(open quadrant; C_plane) = Q in degree 0.
        let plane = BlockComplex::constant_on(LCPolyhedron::whole(2));
        let quad = LCPolyhedron::from_halfspaces(
            2,
            vec![hs(&[1, 0], 0, true), hs(&[0, 1], 0, true)],
        );
        let s = sections_over_open(&plane, &quad);
        assert_eq!(s.get(&0), Some(&1));
        assert_eq!(s.len(), 1);

        // RGamma(R^2; C_{open quadrant}) = 0.
        let qsheaf = BlockComplex::constant_on(quad);
        let s = sections_over_open(&qsheaf, &LCPolyhedron::whole(2));
        assert!(s.is_empty());

        // RGamma(R; C_{[0,1)}) = 0 but RGamma(R; C_{[0,1]}) = Q.
        let ho = BlockComplex::constant_on(LCPolyhedron::from_halfspaces(
            1,
            vec![hs(&[1], 0, false), hs(&[-1], -1, true)],
        ));
        assert!(sections_over_open(&ho, &LCPolyhedron::whole(1)).is_empty());
        let cl = BlockComplex::constant_on(LCPolyhedron::from_halfspaces(
            1,
            vec![hs(&[1], 0, false), hs(&[-1], -1, false)],
        ));
        let s = sections_over_open(&cl, &LCPolyhedron::whole(1));
        assert_eq!(s.get(&0), Some(&1));
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn hom_detects_half_open_asymmetry() {
        // Hom(C_{[0,1)}, C_{(0,inf)}) = 0 while Hom(C_{(0,1)}, C_{(0,inf)}) = Q.
        let target =
            BlockComplex::constant_on(LCPolyhedron::from_halfspaces(1, vec![hs(&[1], 0, true)]));
        let half_open = BlockComplex::constant_on(LCPolyhedron::from_halfspaces(
            1,
            vec![hs(&[1], 0, false), hs(&[-1], -1, true)],
        ));
        assert!(hom(&half_open, &target).is_empty());
        let open = BlockComplex::constant_on(LCPolyhedron::from_halfspaces(
            1,
            vec![hs(&[1], 0, true), hs(&[-1], -1, true)],
        ));
        let h = hom(&open, &target);
        assert_eq!(h.get(&0), Some(&1));
        assert_eq!(h.len(), 1);
    }

    #[test]
    fn chart_cover_complex_is_a_shifted_skyscraper() {
        // [C_{(0,inf)} (+) C_{(-inf,0)} -> C_R] has the homotopy type of a
        // skyscraper at 0 placed in degree 1.
        let pos = LCPolyhedron::from_halfspaces(1, vec![hs(&[1], 0, true)]);
        let neg = LCPolyhedron::from_halfspaces(1, vec![hs(&[-1], 0, true)]);
        let cx = BlockComplex {
            rank: 1,
            blocks: vec![
                Block {
                    degree: 0,
                    support: pos,
                },
                Block {
                    degree: 0,
                    support: neg,
                },
                Block {
                    degree: 1,
                    support: LCPolyhedron::whole(1),
                },
            ],
            maps: vec![
                BlockMap {
                    from: 0,
                    to: 2,
                    scalar: rat(1),
                },
                BlockMap {
                    from: 1,
                    to: 2,
                    scalar: rat(-1),
                },
            ],
        };
        assert!(cx.check_differential());
        let h = hom(&cx, &cx);
        assert_eq!(h.get(&0), Some(&1), "{h:?}");
        assert_eq!(h.len(), 1);

        let sky = BlockComplex::constant_on(LCPolyhedron::point(&lv(&[0])));
        // cx ~ sky[-1], so Hom(cx, sky) = Hom(sky, sky)[... shifts:
        // Hom^i(A[-1], B) = Hom^{i+1}(A, B) and Hom^i(A, B[-1]) = Hom^{i-1}(A, B).
        let h1 = hom(&cx, &sky);
        assert_eq!(h1.get(&-1), Some(&1), "{h1:?}");
        assert_eq!(h1.len(), 1);
        let h2 = hom(&sky, &cx);
        assert_eq!(h2.get(&1), Some(&1), "{h2:?}");
        assert_eq!(h2.len(), 1);
        let end_sky = hom(&sky, &sky);
        assert_eq!(end_sky.get(&0), Some(&1));
        assert_eq!(end_sky.len(), 1);
    }

    #[test]
    fn microstalk_of_half_open_interval_sheaf() {
        // F = C_{[0,1)} on R: at p = 0 the covector +1 sees a
        // one-dimensional stalk and -1 sees nothing.
        let f = BlockComplex::constant_on(LCPolyhedron::from_halfspaces(
            1,
            vec![hs(&[1], 0, false), hs(&[-1], -1, true)],
        ));
        let p = RatPoint::from_ints(&[0]);
        let plus = microstalk(&f, &p, &lv(&[1]));
        assert_eq!(plus.values().sum::<usize>(), 1, "{plus:?}");
        let minus = microstalk(&f, &p, &lv(&[-1]));
        assert!(minus.is_empty(), "{minus:?}");

        let c = BlockComplex::constant_on(LCPolyhedron::whole(1));
        assert!(microstalk(&c, &p, &lv(&[1])).is_empty());
        assert!(microstalk(&c, &p, &lv(&[-1])).is_empty());
    }

    #[test]
    fn microstalk_matches_wall_convention_in_2d() {
        // C_{m1 >= 0}: the wall carries +(1,0) only.
        let f = BlockComplex::constant_on(LCPolyhedron::from_halfspaces(
            2,
            vec![hs(&[1, 0], 0, false)],
        ));
        let p = RatPoint::new(alloc::vec![Rat::zero(), ratio(1, 3)]);
        assert!(!microstalk(&f, &p, &lv(&[1, 0])).is_empty());
        assert!(microstalk(&f, &p, &lv(&[-1, 0])).is_empty());
        assert!(microstalk(&f, &p, &lv(&[0, 1])).is_empty());

        // C_{m1 > 0}: the wall carries -(1,0) only.
        let f = BlockComplex::constant_on(LCPolyhedron::from_halfspaces(
            2,
            vec![hs(&[1, 0], 0, true)],
        ));
        assert!(microstalk(&f, &p, &lv(&[1, 0])).is_empty());
        assert!(!microstalk(&f, &p, &lv(&[-1, 0])).is_empty());
    }
}
