//! Locally closed rational polyhedra in M_R (rank <= 2), in canonical
//! irredundant form, with the face and microsupport calculus the sheaf
//! engine is built on.
//!
//! Feasibility, implied equalities and redundancy are all decided by exact
//! Fourier-Motzkin elimination; no floating point anywhere.

use alloc::collections::BTreeSet;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::CccError;
use crate::fan::Fan;
use crate::lattice::{rat, rat_ceil, rat_floor, ConvexCone, LatticeVector, Rat, RatPoint};

/// {m : <m, normal> >= level}, or the strict variant.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfSpace {
    pub normal: LatticeVector,
    pub level: i128,
    pub strict: bool,
}

impl HalfSpace {
    pub fn new(normal: LatticeVector, level: i128, strict: bool) -> Self {
        assert!(normal.is_primitive(), "half-space normals must be primitive");
        HalfSpace {
            normal,
            level,
            strict,
        }
    }

    pub fn contains(&self, p: &RatPoint) -> bool {
        let v = self.normal.dot_rat(p);
        if self.strict {
            v > rat(self.level)
        } else {
            v >= rat(self.level)
        }
    }

    fn as_lin(&self) -> LinIneq {
        LinIneq {
            normal: self.normal.clone(),
            level: rat(self.level),
            strict: self.strict,
        }
    }
}

/// Internal inequality with rational level, used by the feasibility engine.
#[derive(Clone, Debug)]
struct LinIneq {
    normal: LatticeVector,
    level: Rat,
    strict: bool,
}

impl LinIneq {
    fn negation(&self) -> LinIneq {
        // not(<m,v> >= c) is <m,-v> > -c; not(<m,v> > c) is <m,-v> >= -c.
        LinIneq {
            normal: self.normal.neg(),
            level: -self.level.clone(),
            strict: !self.strict,
        }
    }
}

/// 1D bound bookkeeping: a*x >= c (or >) with a != 0 reduces to a lower or
/// upper bound on x.
#[derive(Clone, Debug)]
struct Bounds {
    lower: Option<(Rat, bool)>,
    upper: Option<(Rat, bool)>,
    infeasible: bool,
}

impl Bounds {
    fn new() -> Self {
        Bounds {
            lower: None,
            upper: None,
            infeasible: false,
        }
    }

    fn add_lower(&mut self, v: Rat, strict: bool) {
        let replace = match &self.lower {
            None => true,
            Some((cur, cur_strict)) => v > *cur || (v == *cur && strict && !cur_strict),
        };
        if replace {
            self.lower = Some((v, strict));
        }
    }

    fn add_upper(&mut self, v: Rat, strict: bool) {
        let replace = match &self.upper {
            None => true,
            Some((cur, cur_strict)) => v < *cur || (v == *cur && strict && !cur_strict),
        };
        if replace {
            self.upper = Some((v, strict));
        }
    }

    fn feasible(&self) -> bool {
        if self.infeasible {
            return false;
        }
        match (&self.lower, &self.upper) {
            (Some((l, ls)), Some((u, us))) => l < u || (l == u && !ls && !us),
            _ => true,
        }
    }
}

/// Exact feasibility of a system of strict/non-strict half-space constraints
/// in rank 1 or 2, by Fourier-Motzkin elimination of the last coordinate.
fn feasible(rank: usize, ineqs: &[LinIneq]) -> bool {
    match rank {
        0 => ineqs.iter().all(|i| {
            // Constraint on the empty space: 0 >= level.
            let z = Rat::zero();
            if i.strict {
                z > i.level
            } else {
                z >= i.level
            }
        }),
        1 => {
            let mut b = Bounds::new();
            for i in ineqs {
                let a = i.normal.coord(0);
                if a == 0 {
                    let ok = if i.strict {
                        Rat::zero() > i.level
                    } else {
                        Rat::zero() >= i.level
                    };
                    if !ok {
                        return false;
                    }
                } else if a > 0 {
                    b.add_lower(&i.level / rat(a), i.strict);
                } else {
                    b.add_upper(&i.level / rat(a), i.strict);
                }
            }
            b.feasible()
        }
        2 => {
            // Split by the sign of the m2 coefficient. Constraints with
            // b != 0 become m2-bounds alpha + beta*m1; pairs of lower/upper
            // bounds eliminate m2.
            let mut pure: Vec<(Rat, Rat, bool)> = Vec::new(); // a*m1 >=(>) c
            let mut lowers: Vec<(Rat, Rat, bool)> = Vec::new(); // m2 >= alpha + beta*m1
            let mut uppers: Vec<(Rat, Rat, bool)> = Vec::new();
            for i in ineqs {
                let a = rat(i.normal.coord(0));
                let b = i.normal.coord(1);
                if b == 0 {
                    pure.push((a, i.level.clone(), i.strict));
                } else {
                    let alpha = &i.level / rat(b);
                    let beta = -&a / rat(b);
                    if b > 0 {
                        lowers.push((alpha, beta, i.strict));
                    } else {
                        uppers.push((alpha, beta, i.strict));
                    }
                }
            }
            for (al, bl, sl) in &lowers {
                for (au, bu, su) in &uppers {
                    // alpha_l + beta_l*m1 <= alpha_u + beta_u*m1
                    // (strict if either side strict).
                    pure.push((bu - bl, al - au, *sl || *su));
                }
            }
            let mut b1 = Bounds::new();
            for (a, c, s) in pure {
                if a.is_zero() {
                    let ok = if s { Rat::zero() > c } else { Rat::zero() >= c };
                    if !ok {
                        return false;
                    }
                } else if a > Rat::zero() {
                    b1.add_lower(&c / &a, s);
                } else {
                    b1.add_upper(&c / &a, s);
                }
            }
            b1.feasible()
        }
        r => panic!("feasibility engine supports rank <= 2, got {r}"),
    }
}

/// A locally closed rational polyhedron in canonical form: affine-hull
/// equations plus an irredundant set of facet half-spaces.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LCPolyhedron {
    rank: usize,
    empty: bool,
    /// <m, normal> = level; normals primitive with lexicographically
    /// positive sign, sorted.
    eqs: Vec<(LatticeVector, i128)>,
    /// Irredundant facet half-spaces, sorted by (normal, level, strict).
    ineqs: Vec<HalfSpace>,
}

impl LCPolyhedron {
    /// The whole of M_R.
    pub fn whole(rank: usize) -> Self {
        LCPolyhedron {
            rank,
            empty: false,
            eqs: Vec::new(),
            ineqs: Vec::new(),
        }
    }

    pub fn empty(rank: usize) -> Self {
        LCPolyhedron {
            rank,
            empty: true,
            eqs: Vec::new(),
            ineqs: Vec::new(),
        }
    }

    /// A single rational point is not representable (integer levels only)
    /// unless the point is a lattice point.
    pub fn point(p: &LatticeVector) -> Self {
        let rank = p.rank();
        let halves: Vec<HalfSpace> = (0..rank)
            .flat_map(|i| {
                let mut e = vec![0i128; rank];
                e[i] = 1;
                let ei = LatticeVector::new(e);
                [
                    HalfSpace::new(ei.clone(), p.coord(i), false),
                    HalfSpace::new(ei.neg(), -p.coord(i), false),
                ]
            })
            .collect();
        LCPolyhedron::from_halfspaces(rank, halves)
    }

    /// Canonicalize an arbitrary list of half-spaces.
    pub fn from_halfspaces(rank: usize, halves: Vec<HalfSpace>) -> Self {
        assert!(rank <= 2, "polyhedra are supported in rank <= 2");
        let mut sys: Vec<LinIneq> = halves.iter().map(|h| h.as_lin()).collect();
        if !feasible(rank, &sys) {
            return LCPolyhedron::empty(rank);
        }

        // Tightest constraint per direction.
        let mut tight: Vec<HalfSpace> = Vec::new();
        for h in &halves {
            match tight.iter_mut().find(|t| t.normal == h.normal) {
                None => tight.push(h.clone()),
                Some(t) => {
                    if h.level > t.level || (h.level == t.level && h.strict && !t.strict) {
                        *t = h.clone();
                    }
                }
            }
        }

        // Implied equalities: a non-strict face whose wall contains the set.
        let mut eqs: Vec<(LatticeVector, i128)> = Vec::new();
        loop {
            sys = eq_system(&eqs)
                .into_iter()
                .chain(tight.iter().map(|h| h.as_lin()))
                .collect();
            let mut found = None;
            for (k, h) in tight.iter().enumerate() {
                if h.strict {
                    continue;
                }
                let mut test = sys.clone();
                test.push(LinIneq {
                    normal: h.normal.clone(),
                    level: rat(h.level),
                    strict: true,
                });
                if !feasible(rank, &test) {
                    found = Some(k);
                    break;
                }
            }
            match found {
                Some(k) => {
                    let h = tight.remove(k);
                    let (n, l) = normalize_eq(h.normal, h.level);
                    if !eqs.contains(&(n.clone(), l)) {
                        eqs.push((n, l));
                    }
                }
                None => break,
            }
        }
        eqs.sort();
        eqs.dedup();
        // Keep a linearly independent equation basis; the rest are implied
        // by consistency of the (nonempty) system.
        let mut basis: Vec<(LatticeVector, i128)> = Vec::new();
        for (n, l) in eqs {
            let dependent = match basis.len() {
                0 => false,
                1 => {
                    if rank == 1 {
                        true
                    } else {
                        basis[0].0.cross2(&n) == 0
                    }
                }
                _ => true,
            };
            if !dependent {
                basis.push((n, l));
            }
        }
        let eqs = basis;

        // Drop redundant inequalities (greedy, deterministic order).
        tight.sort();
        let mut keep: Vec<HalfSpace> = Vec::new();
        for i in 0..tight.len() {
            let mut others: Vec<LinIneq> = eq_system(&eqs);
            others.extend(keep.iter().map(|h| h.as_lin()));
            others.extend(tight[i + 1..].iter().map(|h| h.as_lin()));
            others.push(tight[i].as_lin().negation());
            if feasible(rank, &others) {
                keep.push(tight[i].clone());
            }
        }
        LCPolyhedron {
            rank,
            empty: false,
            eqs,
            ineqs: keep,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_empty(&self) -> bool {
        self.empty
    }

    pub fn is_whole(&self) -> bool {
        !self.empty && self.eqs.is_empty() && self.ineqs.is_empty()
    }

    pub fn equations(&self) -> &[(LatticeVector, i128)] {
        &self.eqs
    }

    pub fn inequalities(&self) -> &[HalfSpace] {
        &self.ineqs
    }

    /// All constraints as half-spaces (equations expanded into pairs).
    /// Equation normals may be non-primitive for non-lattice point faces,
    /// so the half-spaces are built without the primitivity assertion.
    pub fn halfspaces(&self) -> Vec<HalfSpace> {
        let mut out = Vec::new();
        for (n, l) in &self.eqs {
            out.push(HalfSpace {
                normal: n.clone(),
                level: *l,
                strict: false,
            });
            out.push(HalfSpace {
                normal: n.neg(),
                level: -l,
                strict: false,
            });
        }
        out.extend(self.ineqs.iter().cloned());
        out
    }

    pub fn dim(&self) -> Option<usize> {
        if self.empty {
            return None;
        }
        Some(self.rank - self.eqs.len())
    }

    pub fn contains(&self, p: &RatPoint) -> bool {
        if self.empty {
            return false;
        }
        self.eqs
            .iter()
            .all(|(n, l)| n.dot_rat(p) == rat(*l))
            && self.ineqs.iter().all(|h| h.contains(p))
    }

    pub fn contains_lattice(&self, v: &LatticeVector) -> bool {
        self.contains(&v.as_rat_point())
    }

    pub fn intersect(&self, other: &LCPolyhedron) -> LCPolyhedron {
        assert_eq!(self.rank, other.rank);
        if self.empty || other.empty {
            return LCPolyhedron::empty(self.rank);
        }
        let mut halves = self.halfspaces();
        halves.extend(other.halfspaces());
        LCPolyhedron::from_halfspaces(self.rank, halves)
    }

    pub fn translate(&self, v: &LatticeVector) -> LCPolyhedron {
        if self.empty {
            return self.clone();
        }
        LCPolyhedron {
            rank: self.rank,
            empty: false,
            eqs: self
                .eqs
                .iter()
                .map(|(n, l)| (n.clone(), l + n.dot(v)))
                .collect(),
            ineqs: self
                .ineqs
                .iter()
                .map(|h| HalfSpace::new(h.normal.clone(), h.level + h.normal.dot(v), h.strict))
                .collect(),
        }
    }

    /// All strictness dropped.
    pub fn closure(&self) -> LCPolyhedron {
        if self.empty {
            return self.clone();
        }
        LCPolyhedron {
            rank: self.rank,
            empty: false,
            eqs: self.eqs.clone(),
            ineqs: self
                .ineqs
                .iter()
                .map(|h| HalfSpace::new(h.normal.clone(), h.level, false))
                .collect(),
        }
    }

    /// Strictness of every facet flipped (the Verdier-flip of the cell).
    pub fn flip(&self) -> LCPolyhedron {
        if self.empty {
            return self.clone();
        }
        LCPolyhedron {
            rank: self.rank,
            empty: false,
            eqs: self.eqs.clone(),
            ineqs: self
                .ineqs
                .iter()
                .map(|h| HalfSpace::new(h.normal.clone(), h.level, !h.strict))
                .collect(),
        }
    }

    /// Relative interior: every facet strict, affine hull kept.
    pub fn relative_interior(&self) -> LCPolyhedron {
        if self.empty {
            return self.clone();
        }
        LCPolyhedron {
            rank: self.rank,
            empty: false,
            eqs: self.eqs.clone(),
            ineqs: self
                .ineqs
                .iter()
                .map(|h| HalfSpace::new(h.normal.clone(), h.level, true))
                .collect(),
        }
    }

    /// Set containment, decided exactly.
    pub fn subset_of(&self, other: &LCPolyhedron) -> bool {
        if self.empty {
            return true;
        }
        if other.empty {
            return false;
        }
        let sys: Vec<LinIneq> = self.halfspaces().iter().map(|h| h.as_lin()).collect();
        for h in other.halfspaces() {
            let mut test = sys.clone();
            test.push(h.as_lin().negation());
            if feasible(self.rank, &test) {
                return false;
            }
        }
        true
    }

    pub fn set_eq(&self, other: &LCPolyhedron) -> bool {
        self.subset_of(other) && other.subset_of(self)
    }

    /// Vertices of the closure, sorted.
    pub fn vertices(&self) -> Vec<RatPoint> {
        if self.empty {
            return Vec::new();
        }
        let mut out: BTreeSet<RatPoint> = BTreeSet::new();
        let closure = self.closure();
        match self.dim().unwrap() {
            0 => {
                if let Some(p) = solve_eq_point(&self.eqs) {
                    out.insert(p);
                }
            }
            1 => {
                // Walls of facets cut the affine line at candidate points.
                for h in &self.ineqs {
                    let mut eqs = self.eqs.clone();
                    eqs.push(normalize_eq(h.normal.clone(), h.level));
                    if let Some(p) = solve_eq_point(&eqs) {
                        if closure.contains(&p) {
                            out.insert(p);
                        }
                    }
                }
            }
            2 => {
                for (i, a) in self.ineqs.iter().enumerate() {
                    for b in self.ineqs.iter().skip(i + 1) {
                        let eqs = vec![
                            normalize_eq(a.normal.clone(), a.level),
                            normalize_eq(b.normal.clone(), b.level),
                        ];
                        if let Some(p) = solve_eq_point(&eqs) {
                            if closure.contains(&p) {
                                out.insert(p);
                            }
                        }
                    }
                }
            }
            _ => unreachable!(),
        }
        out.into_iter().collect()
    }

    /// Facet half-spaces whose wall passes through the given point.
    pub fn active_at(&self, p: &RatPoint) -> Vec<&HalfSpace> {
        self.ineqs
            .iter()
            .filter(|h| h.normal.dot_rat(p) == rat(h.level))
            .collect()
    }

    /// Is the set bounded? (Exact; rank <= 2.)
    pub fn is_bounded(&self) -> bool {
        if self.empty {
            return true;
        }
        // Bounded iff the recession cone of the closure is {0}: for every
        // direction d != 0 on the affine hull, some constraint excludes it.
        match self.dim().unwrap() {
            0 => true,
            1 => {
                let d = if self.rank == 1 {
                    LatticeVector::new(vec![1])
                } else {
                    line_direction(&self.eqs, self.rank)
                };
                let blocks = |dir: &LatticeVector| {
                    self.ineqs.iter().any(|h| h.normal.dot(dir) < 0)
                };
                blocks(&d) && blocks(&d.neg())
            }
            2 => {
                // Recession cone = {d : <d, n> >= 0 for all facet normals}.
                // Nontrivial iff the normals fit in a closed half-plane.
                if self.ineqs.is_empty() {
                    return false;
                }
                let gens: Vec<LatticeVector> =
                    self.ineqs.iter().map(|h| h.normal.clone()).collect();
                matches!(ConvexCone::hull(self.rank, &gens), ConvexCone::Plane)
            }
            _ => unreachable!(),
        }
    }

    /// Exact enumeration of lattice points, using the given window when the
    /// set is unbounded (and a window derived from the vertices otherwise).
    pub fn lattice_points(
        &self,
        window: Option<(&LatticeVector, &LatticeVector)>,
    ) -> Result<Vec<LatticeVector>, CccError> {
        if self.empty {
            return Ok(Vec::new());
        }
        let (lo, hi) = match window {
            Some((lo, hi)) => (lo.clone(), hi.clone()),
            None => {
                if !self.is_bounded() {
                    return Err(CccError::Argument(
                        "unbounded polyhedron needs an enumeration window".to_string(),
                    ));
                }
                let vs = self.vertices();
                if vs.is_empty() {
                    return Ok(Vec::new());
                }
                let mut lo = vec![i128::MAX; self.rank];
                let mut hi = vec![i128::MIN; self.rank];
                for v in &vs {
                    for i in 0..self.rank {
                        lo[i] = lo[i].min(rat_floor(&v.coord(i)));
                        hi[i] = hi[i].max(rat_ceil(&v.coord(i)));
                    }
                }
                (LatticeVector::new(lo), LatticeVector::new(hi))
            }
        };
        let mut out = Vec::new();
        let mut cursor = lo.coords().to_vec();
        'scan: loop {
            let cand = LatticeVector::new(cursor.clone());
            if self.contains_lattice(&cand) {
                out.push(cand);
            }
            for i in (0..self.rank).rev() {
                cursor[i] += 1;
                if cursor[i] <= hi.coord(i) {
                    continue 'scan;
                }
                cursor[i] = lo.coord(i);
                if i == 0 {
                    break 'scan;
                }
            }
            if self.rank == 0 {
                break;
            }
        }
        Ok(out)
    }
}

fn normalize_eq(normal: LatticeVector, level: i128) -> (LatticeVector, i128) {
    // First nonzero coordinate positive.
    let flip = normal
        .coords()
        .iter()
        .find(|c| **c != 0)
        .map(|c| *c < 0)
        .unwrap_or(false);
    if flip {
        (normal.neg(), -level)
    } else {
        (normal, level)
    }
}

fn eq_system(eqs: &[(LatticeVector, i128)]) -> Vec<LinIneq> {
    eqs.iter()
        .flat_map(|(n, l)| {
            [
                LinIneq {
                    normal: n.clone(),
                    level: rat(*l),
                    strict: false,
                },
                LinIneq {
                    normal: n.neg(),
                    level: rat(-l),
                    strict: false,
                },
            ]
        })
        .collect()
}

/// Solve a (consistent, full-rank) equation system for its unique point.
fn solve_eq_point(eqs: &[(LatticeVector, i128)]) -> Option<RatPoint> {
    match eqs.len() {
        1 => {
            let (n, l) = &eqs[0];
            if n.rank() == 1 {
                return Some(RatPoint::new(vec![rat(*l) / rat(n.coord(0))]));
            }
            None
        }
        2 => {
            let (n1, l1) = &eqs[0];
            let (n2, l2) = &eqs[1];
            let d = n1.cross2(n2);
            if d == 0 {
                return None;
            }
            // Cramer.
            let x = (rat(*l1) * rat(n2.coord(1)) - rat(*l2) * rat(n1.coord(1))) / rat(d);
            let y = (rat(n1.coord(0)) * rat(*l2) - rat(n2.coord(0)) * rat(*l1)) / rat(d);
            Some(RatPoint::new(vec![x, y]))
        }
        _ => None,
    }
}

fn line_direction(eqs: &[(LatticeVector, i128)], rank: usize) -> LatticeVector {
    assert!(rank == 2 && eqs.len() == 1);
    let n = &eqs[0].0;
    LatticeVector::new(vec![-n.coord(1), n.coord(0)])
}

/// A face of the closure together with the normals of the walls through it.
#[derive(Clone, Debug)]
pub struct FaceData {
    pub face: LCPolyhedron,
    pub defining_rays: Vec<LatticeVector>,
}

/// A face paired with the exact conormal cone of the constant sheaf there.
#[derive(Clone, Debug)]
pub struct MsFace {
    pub face: LCPolyhedron,
    pub conormal: ConvexCone,
}

/// Faces of the closure of Z (the whole closure, facets, vertices), each
/// with its defining rays.
pub fn faces(z: &LCPolyhedron) -> Vec<FaceData> {
    if z.is_empty() {
        return Vec::new();
    }
    let closure = z.closure();
    let mut out = vec![FaceData {
        face: closure.clone(),
        defining_rays: z.eqs.iter().map(|(n, _)| n.clone()).collect(),
    }];
    let dim = z.dim().unwrap();
    if dim == 0 {
        return out;
    }
    // Facets: one per irredundant inequality wall.
    for h in &z.ineqs {
        let mut halves = closure.halfspaces();
        halves.push(HalfSpace::new(h.normal.clone(), h.level, false));
        halves.push(HalfSpace::new(h.normal.neg(), -h.level, false));
        let f = LCPolyhedron::from_halfspaces(z.rank, halves);
        if f.is_empty() {
            continue;
        }
        let mut rays: Vec<LatticeVector> = z.eqs.iter().map(|(n, _)| n.clone()).collect();
        rays.push(h.normal.clone());
        out.push(FaceData {
            face: f,
            defining_rays: rays,
        });
    }
    if dim == 2 {
        for v in z.vertices() {
            let vp = LCPolyhedron::point_rat(&v, z.rank);
            let rays: Vec<LatticeVector> = z
                .active_at(&v)
                .iter()
                .map(|h| h.normal.clone())
                .collect();
            out.push(FaceData {
                face: vp,
                defining_rays: rays,
            });
        }
    }
    out
}

impl LCPolyhedron {
    /// A single rational point as a degenerate polyhedron; non-lattice
    /// coordinates use scaled (non-primitive) equation normals. Internal,
    /// for face bookkeeping only.
    fn point_rat(p: &RatPoint, rank: usize) -> LCPolyhedron {
        let mut eqs = Vec::new();
        for i in 0..rank {
            let c = p.coord(i);
            let mut n = vec![0i128; rank];
            n[i] = *c.denom();
            eqs.push(normalize_eq(LatticeVector::new(n), *c.numer()));
        }
        eqs.sort();
        LCPolyhedron {
            rank,
            empty: false,
            eqs,
            ineqs: Vec::new(),
        }
    }
}

/// The intersection over all fan rays of the tightest integer-level
/// half-space containing x: the closure of x with respect to the skeleton.
pub fn closure_of_point(x: &RatPoint, fan: &Fan) -> Result<LCPolyhedron, CccError> {
    if fan.rank() > 2 {
        return Err(CccError::UnsupportedRank {
            got: fan.rank(),
            max: 2,
        });
    }
    if x.rank() != fan.rank() {
        return Err(CccError::Argument("point rank mismatch".to_string()));
    }
    let halves: Vec<HalfSpace> = fan
        .rays()
        .iter()
        .map(|r| {
            let level = rat_floor(&r.dot_rat(x));
            HalfSpace::new(r.clone(), level, false)
        })
        .collect();
    Ok(LCPolyhedron::from_halfspaces(fan.rank(), halves))
}

/// Number of fan rays strictly inside the cone spanned by the two facet
/// normals at the vertex v of Z.
pub fn vertex_length(z: &LCPolyhedron, v: &RatPoint, fan: &Fan) -> Result<usize, CccError> {
    let (r0, r1) = defining_ray_pair(z, v)?;
    Ok(rays_strictly_between(&r0, &r1, fan).len())
}

/// The two facet normals at a vertex, ordered counterclockwise.
pub fn defining_ray_pair(
    z: &LCPolyhedron,
    v: &RatPoint,
) -> Result<(LatticeVector, LatticeVector), CccError> {
    if !z.vertices().contains(v) {
        return Err(CccError::Argument("not a vertex of the polyhedron".to_string()));
    }
    let active = z.active_at(v);
    if active.len() != 2 {
        return Err(CccError::Argument(
            "vertex does not have exactly two defining rays".to_string(),
        ));
    }
    let (a, b) = (active[0].normal.clone(), active[1].normal.clone());
    if a.cross2(&b) > 0 {
        Ok((a, b))
    } else {
        Ok((b, a))
    }
}

/// Fan rays strictly inside the open sector from r0 to r1 (counterclockwise).
pub fn rays_strictly_between(
    r0: &LatticeVector,
    r1: &LatticeVector,
    fan: &Fan,
) -> Vec<LatticeVector> {
    fan.rays()
        .iter()
        .filter(|r| r0.cross2(r) > 0 && r.cross2(r1) > 0)
        .cloned()
        .collect()
}

/// The microsupport of the (extension by zero of the) constant sheaf on Z:
/// the exact conormal cone over the relative interior of each closure face.
///
/// Sign authority: a non-strict facet with inward normal n contributes +n,
/// a strict facet contributes -n, and each affine-hull equation contributes
/// the full conormal line.
pub fn ms_constant_sheaf(z: &LCPolyhedron) -> Vec<MsFace> {
    if z.is_empty() {
        return Vec::new();
    }
    let rank = z.rank();
    faces(z)
        .into_iter()
        .map(|fd| {
            let mut gens: Vec<LatticeVector> = Vec::new();
            for (n, _) in z.equations() {
                gens.push(n.clone());
                gens.push(n.neg());
            }
            // Active constraints: walls containing the face.
            for h in z.inequalities() {
                if face_on_wall(&fd.face, h) {
                    if h.strict {
                        gens.push(h.normal.neg());
                    } else {
                        gens.push(h.normal.clone());
                    }
                }
            }
            MsFace {
                face: fd.face,
                conormal: ConvexCone::hull(rank, &gens),
            }
        })
        .collect()
}

fn face_on_wall(face: &LCPolyhedron, h: &HalfSpace) -> bool {
    // The face lies on the wall iff adding the strict version is infeasible.
    let mut sys: Vec<LinIneq> = face.halfspaces().iter().map(|x| x.as_lin()).collect();
    sys.push(LinIneq {
        normal: h.normal.clone(),
        level: rat(h.level),
        strict: true,
    });
    !feasible(face.rank(), &sys)
}

/// Is Z cut out by fan-ray walls in the orientation the skeleton allows?
/// Non-strict facets need their normal in Sigma(1); strict facets need the
/// negated normal in Sigma(1); equations need both signs.
pub fn is_lambda_polyhedral(z: &LCPolyhedron, fan: &Fan) -> bool {
    if z.is_empty() {
        return true;
    }
    let rays = fan.rays();
    for (n, _) in z.equations() {
        if !rays.contains(n) || !rays.contains(&n.neg()) {
            return false;
        }
    }
    for h in z.inequalities() {
        let needed = if h.strict { h.normal.neg() } else { h.normal.clone() };
        if !rays.contains(&needed) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::corpus;
    use crate::lattice::ratio;

    fn lv(c: &[i128]) -> LatticeVector {
        LatticeVector::new(c.to_vec())
    }

    fn hs(n: &[i128], level: i128, strict: bool) -> HalfSpace {
        HalfSpace::new(lv(n), level, strict)
    }

    #[test]
    fn canonicalization_basics() {
        // Whole plane.
        let whole = LCPolyhedron::from_halfspaces(2, vec![]);
        assert!(whole.is_whole());

        // Redundant constraint dropped.
        let q = LCPolyhedron::from_halfspaces(
            2,
            vec![hs(&[1, 0], 0, false), hs(&[0, 1], 0, false), hs(&[1, 1], -1, false)],
        );
        assert_eq!(q.inequalities().len(), 2);

        // Opposite closed pair collapses to an equation.
        let line = LCPolyhedron::from_halfspaces(
            2,
            vec![hs(&[0, 1], 0, false), hs(&[0, -1], 0, false)],
        );
        assert_eq!(line.dim(), Some(1));
        assert_eq!(line.equations(), &[(lv(&[0, 1]), 0)]);

        // Strict against closed opposite: empty.
        let e = LCPolyhedron::from_halfspaces(
            2,
            vec![hs(&[0, 1], 0, true), hs(&[0, -1], 0, false)],
        );
        assert!(e.is_empty());
    }

    #[test]
    fn implied_point_from_three_walls() {
        // m1 >= 0, m2 >= 0, -m1-m2 >= 0 pins the origin.
        let p = LCPolyhedron::from_halfspaces(
            2,
            vec![hs(&[1, 0], 0, false), hs(&[0, 1], 0, false), hs(&[-1, -1], 0, false)],
        );
        assert_eq!(p.dim(), Some(0));
        assert!(p.contains_lattice(&lv(&[0, 0])));
        assert!(!p.contains_lattice(&lv(&[1, 0])));
    }

    #[test]
    fn closure_of_point_examples() {
        let p2 = corpus::p2();
        // Origin: the single point {0}.
        let c0 = closure_of_point(&RatPoint::from_ints(&[0, 0]), &p2).unwrap();
        assert_eq!(c0.dim(), Some(0));
        assert!(c0.contains_lattice(&lv(&[0, 0])));

        // Generic point in the unit triangle.
        let x = RatPoint::new(vec![ratio(1, 2), ratio(1, 4)]);
        let c = closure_of_point(&x, &p2).unwrap();
        assert!(c.contains(&x));
        assert_eq!(c.dim(), Some(2));
        let mut vs = c.vertices();
        vs.sort();
        assert_eq!(
            vs,
            vec![
                RatPoint::from_ints(&[0, 0]),
                RatPoint::from_ints(&[0, 1]),
                RatPoint::from_ints(&[1, 0]),
            ]
        );
        assert!(is_lambda_polyhedral(&c, &p2));

        // Rank 1: x = 1/2 gives the segment [0, 1].
        let p1 = corpus::p1();
        let c = closure_of_point(&RatPoint::new(vec![ratio(1, 2)]), &p1).unwrap();
        let pts = c.lattice_points(None).unwrap();
        assert_eq!(pts, vec![lv(&[0]), lv(&[1])]);
    }

    #[test]
    fn vertex_length_examples() {
        let quadrant = LCPolyhedron::from_halfspaces(
            2,
            vec![hs(&[1, 0], 0, false), hs(&[0, 1], 0, false)],
        );
        let origin = RatPoint::from_ints(&[0, 0]);
        assert_eq!(vertex_length(&quadrant, &origin, &corpus::p2()).unwrap(), 0);
        assert_eq!(
            vertex_length(&quadrant, &origin, &corpus::bl1_p2()).unwrap(),
            1
        );
        // Non-vertex point errors.
        assert!(vertex_length(&quadrant, &RatPoint::from_ints(&[1, 1]), &corpus::p2()).is_err());
    }

    #[test]
    fn lattice_point_enumeration() {
        // Closed triangle conv{(0,0),(2,0),(0,2)}: 6 points.
        let t = LCPolyhedron::from_halfspaces(
            2,
            vec![hs(&[1, 0], 0, false), hs(&[0, 1], 0, false), hs(&[-1, -1], -2, false)],
        );
        assert_eq!(t.lattice_points(None).unwrap().len(), 6);

        // Half-open [0,1) in rank 1: only 0.
        let ho = LCPolyhedron::from_halfspaces(
            1,
            vec![hs(&[1], 0, false), hs(&[-1], -1, true)],
        );
        assert_eq!(ho.lattice_points(None).unwrap(), vec![lv(&[0])]);

        // Unbounded without a window errors.
        let q = LCPolyhedron::from_halfspaces(2, vec![hs(&[1, 0], 0, false)]);
        assert!(q.lattice_points(None).is_err());
    }

    #[test]
    fn ms_signs_fix_the_covector_convention() {
        // Closed half-plane {m1 >= 0}: wall carries +(1,0).
        let z = LCPolyhedron::from_halfspaces(2, vec![hs(&[1, 0], 0, false)]);
        let ms = ms_constant_sheaf(&z);
        let wall = ms
            .iter()
            .find(|f| f.face.dim() == Some(1))
            .expect("wall face");
        assert_eq!(wall.conormal, ConvexCone::Ray(lv(&[1, 0])));

        // Open half-plane {m1 > 0}: wall carries -(1,0).
        let z = LCPolyhedron::from_halfspaces(2, vec![hs(&[1, 0], 0, true)]);
        let ms = ms_constant_sheaf(&z);
        let wall = ms.iter().find(|f| f.face.dim() == Some(1)).unwrap();
        assert_eq!(wall.conormal, ConvexCone::Ray(lv(&[-1, 0])));

        // Whole plane: zero section only.
        let ms = ms_constant_sheaf(&LCPolyhedron::whole(2));
        assert_eq!(ms.len(), 1);
        assert_eq!(ms[0].conormal, ConvexCone::Zero);
    }

    #[test]
    fn lambda_polyhedrality() {
        let p2 = corpus::p2();
        // (1,2) is not a ray of P2.
        let z = LCPolyhedron::from_halfspaces(2, vec![hs(&[1, 2], 0, false)]);
        assert!(!is_lambda_polyhedral(&z, &p2));
        // D1 of the resolver example, blowup fan: {m1>=0, m2>=0, m1+m2<1}.
        let d1 = LCPolyhedron::from_halfspaces(
            2,
            vec![
                hs(&[1, 0], 0, false),
                hs(&[0, 1], 0, false),
                hs(&[-1, -1], -1, true),
            ],
        );
        assert!(is_lambda_polyhedral(&d1, &corpus::bl1_p2()));
        // Same set against P2: the strict wall needs (1,1) in Sigma(1).
        assert!(!is_lambda_polyhedral(&d1, &p2));
    }

    #[test]
    fn boundedness_and_flip() {
        let tri = LCPolyhedron::from_halfspaces(
            2,
            vec![hs(&[1, 0], 0, false), hs(&[0, 1], 0, false), hs(&[-1, -1], -1, true)],
        );
        assert!(tri.is_bounded());
        let q = LCPolyhedron::from_halfspaces(2, vec![hs(&[1, 0], 0, false)]);
        assert!(!q.is_bounded());
        let f = tri.flip();
        assert!(f.contains(&RatPoint::new(vec![ratio(1, 4), ratio(1, 4)])));
        assert!(!f.contains(&RatPoint::from_ints(&[0, 0])));
        assert_eq!(f.flip(), tri);
    }
}
