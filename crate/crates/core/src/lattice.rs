//! Exact scalars and lattice vectors.
//!
//! `M` and `N` are dual free abelian groups of rank `n <= 4`. Vectors of
//! both are stored as integer coordinate sequences; points of `M_R` as
//! rational coordinate sequences. All arithmetic is exact; overflow checks
//! stay enabled in release builds.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Zero;

/// Exact rational scalar. i128 components keep desk-scale computations
/// far away from overflow (which would panic, not wrap).
pub type Rat = Ratio<i128>;

/// Rational with denominator 1.
pub fn rat(n: i128) -> Rat {
    Ratio::from_integer(n)
}

/// n/d as an exact rational.
pub fn ratio(n: i128, d: i128) -> Rat {
    Ratio::new(n, d)
}

/// Largest integer <= q.
pub fn rat_floor(q: &Rat) -> i128 {
    q.floor().to_integer()
}

/// Smallest integer >= q.
pub fn rat_ceil(q: &Rat) -> i128 {
    q.ceil().to_integer()
}

/// An element of the lattice M or N (the code never mixes the two sides:
/// pairings always take one vector from each).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector {
    coords: Vec<i128>,
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl LatticeVector {
    pub fn new(coords: Vec<i128>) -> Self {
        LatticeVector { coords }
    }

    pub fn zero(rank: usize) -> Self {
        LatticeVector {
            coords: vec![0; rank],
        }
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[i128] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> i128 {
        self.coords[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| *c == 0)
    }

    /// gcd of the coordinates (0 for the zero vector).
    pub fn content(&self) -> i128 {
        self.coords.iter().fold(0i128, |g, c| g.gcd(c))
    }

    pub fn is_primitive(&self) -> bool {
        self.content() == 1
    }

    /// The primitive vector on the same ray. Panics on the zero vector.
    pub fn primitive(&self) -> Self {
        let g = self.content();
        assert!(g > 0, "zero vector has no primitive representative");
        LatticeVector {
            coords: self.coords.iter().map(|c| c / g).collect(),
        }
    }

    pub fn dot(&self, other: &LatticeVector) -> i128 {
        assert_eq!(self.rank(), other.rank());
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn dot_rat(&self, point: &RatPoint) -> Rat {
        assert_eq!(self.rank(), point.rank());
        self.coords
            .iter()
            .zip(point.coords())
            .map(|(a, b)| b * rat(*a))
            .fold(Rat::zero(), |s, t| s + t)
    }

    pub fn neg(&self) -> Self {
        LatticeVector {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    pub fn add(&self, other: &LatticeVector) -> Self {
        assert_eq!(self.rank(), other.rank());
        LatticeVector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &LatticeVector) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: i128) -> Self {
        LatticeVector {
            coords: self.coords.iter().map(|c| k * c).collect(),
        }
    }

    /// Concatenation, used for products of fans.
    pub fn concat(&self, other: &LatticeVector) -> Self {
        let mut coords = self.coords.clone();
        coords.extend_from_slice(&other.coords);
        LatticeVector { coords }
    }

    pub fn as_rat_point(&self) -> RatPoint {
        RatPoint::new(self.coords.iter().map(|c| rat(*c)).collect())
    }

    /// 2D cross product, positive when `other` is counterclockwise of `self`.
    pub fn cross2(&self, other: &LatticeVector) -> i128 {
        assert_eq!(self.rank(), 2);
        assert_eq!(other.rank(), 2);
        self.coords[0] * other.coords[1] - self.coords[1] * other.coords[0]
    }
}

/// Counterclockwise angular order on nonzero 2D vectors, starting at the
/// positive x-axis. Exact: compares half-planes first, then cross products.
pub fn ccw_cmp(a: &LatticeVector, b: &LatticeVector) -> Ordering {
    fn half(v: &LatticeVector) -> u8 {
        // 0 for the upper half (positive x-axis included), 1 for the lower.
        let (x, y) = (v.coord(0), v.coord(1));
        if y > 0 || (y == 0 && x > 0) {
            0
        } else {
            1
        }
    }
    let (ha, hb) = (half(a), half(b));
    if ha != hb {
        return ha.cmp(&hb);
    }
    // Same half-plane: b is counterclockwise of a iff cross > 0.
    rat(0).cmp(&rat(a.cross2(b)))
}

/// A point of M_R with exact rational coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatPoint {
    coords: Vec<Rat>,
}

impl fmt::Debug for RatPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl RatPoint {
    pub fn new(coords: Vec<Rat>) -> Self {
        RatPoint { coords }
    }

    pub fn from_ints(coords: &[i128]) -> Self {
        RatPoint {
            coords: coords.iter().map(|c| rat(*c)).collect(),
        }
    }

    pub fn zero(rank: usize) -> Self {
        RatPoint {
            coords: vec![Rat::zero(); rank],
        }
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> Rat {
        self.coords[i].clone()
    }

    pub fn add(&self, other: &RatPoint) -> RatPoint {
        assert_eq!(self.rank(), other.rank());
        RatPoint::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &RatPoint) -> RatPoint {
        assert_eq!(self.rank(), other.rank());
        RatPoint::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn add_lattice(&self, v: &LatticeVector) -> RatPoint {
        assert_eq!(self.rank(), v.rank());
        RatPoint::new(
            self.coords
                .iter()
                .zip(v.coords())
                .map(|(a, b)| a + rat(*b))
                .collect(),
        )
    }

    pub fn scale(&self, k: &Rat) -> RatPoint {
        RatPoint::new(self.coords.iter().map(|c| c * k).collect())
    }

    /// Midpoint of two points.
    pub fn midpoint(&self, other: &RatPoint) -> RatPoint {
        self.add(other).scale(&ratio(1, 2))
    }

    /// The unique lattice translate with all coordinates in [0,1), and the
    /// translation that achieves it: `self = reduced + shift`.
    pub fn reduce_mod_lattice(&self) -> (RatPoint, LatticeVector) {
        let mut reduced = Vec::with_capacity(self.rank());
        let mut shift = Vec::with_capacity(self.rank());
        for c in &self.coords {
            let fl = rat_floor(c);
            reduced.push(c - rat(fl));
            shift.push(fl);
        }
        (RatPoint::new(reduced), LatticeVector::new(shift))
    }

    pub fn is_lattice(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    pub fn as_lattice(&self) -> Option<LatticeVector> {
        if !self.is_lattice() {
            return None;
        }
        Some(LatticeVector::new(
            self.coords.iter().map(|c| c.to_integer()).collect(),
        ))
    }
}

/// Determinant of the k x k matrix with the given rows.
pub fn det(rows: &[LatticeVector]) -> i128 {
    let k = rows.len();
    assert!(rows.iter().all(|r| r.rank() == k));
    match k {
        0 => 1,
        1 => rows[0].coord(0),
        2 => rows[0].cross2(&rows[1]),
        _ => {
            // Laplace expansion along the first row; k <= 4 in this crate.
            let mut acc = 0i128;
            for j in 0..k {
                let c = rows[0].coord(j);
                if c == 0 {
                    continue;
                }
                let minor: Vec<LatticeVector> = rows[1..]
                    .iter()
                    .map(|r| {
                        LatticeVector::new(
                            (0..k).filter(|jj| *jj != j).map(|jj| r.coord(jj)).collect(),
                        )
                    })
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                acc += sign * c * det(&minor);
            }
            acc
        }
    }
}

/// gcd of all maximal (k x k) minors of the k x n matrix with the given
/// rows. This is 1 exactly when the rows extend to a basis of the lattice.
pub fn maximal_minor_gcd(rows: &[LatticeVector]) -> i128 {
    let k = rows.len();
    if k == 0 {
        return 1;
    }
    let n = rows[0].rank();
    assert!(k <= n);
    let mut cols: Vec<usize> = (0..k).collect();
    let mut g: i128 = 0;
    loop {
        let sub: Vec<LatticeVector> = rows
            .iter()
            .map(|r| LatticeVector::new(cols.iter().map(|j| r.coord(*j)).collect()))
            .collect();
        g = g.gcd(&det(&sub));
        // Next k-subset of {0..n-1} in lexicographic order.
        let mut i = k;
        loop {
            if i == 0 {
                return g.abs();
            }
            i -= 1;
            if cols[i] != i + n - k {
                cols[i] += 1;
                for j in i + 1..k {
                    cols[j] = cols[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Solve `x * A = b` for integer x where A's rows are `rows` (a unimodular
/// or at least invertible square system), with rational intermediate steps.
/// Returns None when the system has no rational solution or it is not
/// integral.
pub fn solve_integer_left(rows: &[LatticeVector], b: &LatticeVector) -> Option<LatticeVector> {
    let k = rows.len();
    assert!(rows.iter().all(|r| r.rank() == k) && b.rank() == k);
    let d = det(rows);
    if d == 0 {
        return None;
    }
    // Cramer on the transposed system: x_i = det(A with row i replaced by b)/det(A).
    let mut coords = Vec::with_capacity(k);
    for i in 0..k {
        let mut subst: Vec<LatticeVector> = rows.to_vec();
        subst[i] = b.clone();
        let num = det(&subst);
        if num % d != 0 {
            return None;
        }
        coords.push(num / d);
    }
    Some(LatticeVector::new(coords))
}

/// Extend a set of linearly independent lattice vectors spanning a smooth
/// (unimodular) cone to a basis of the full lattice. Rank <= 2 is enough
/// for the sheaf engine; the result's first `rows.len()` vectors are the
/// input.
pub fn extend_to_basis(rows: &[LatticeVector], rank: usize) -> Option<Vec<LatticeVector>> {
    assert!(rows.len() <= rank && rank <= 2);
    let mut basis: Vec<LatticeVector> = rows.to_vec();
    if basis.len() == rank {
        return (det(&basis).abs() == 1).then_some(basis);
    }
    if basis.is_empty() {
        for i in 0..rank {
            let mut coords = vec![0i128; rank];
            coords[i] = 1;
            basis.push(LatticeVector::new(coords));
        }
        return Some(basis);
    }
    // One primitive vector (a,b) in rank 2: complete with (s,t), at - bs = ±1.
    let v = &basis[0];
    if rank == 1 {
        return (v.coord(0).abs() == 1).then_some(basis);
    }
    let (a, b) = (v.coord(0), v.coord(1));
    let g = a.extended_gcd(&b);
    if g.gcd != 1 {
        return None;
    }
    // a*x + b*y = 1 with (x, y) = (g.x, g.y); then det((a,b),(-y,x)) = ax + by = 1.
    basis.push(LatticeVector::new(vec![-g.y, g.x]));
    Some(basis)
}

/// A closed convex cone in N_R, rank <= 2, in canonical form. Sectors are
/// stored counterclockwise; a sector with antipodal boundary rays is the
/// closed half-plane on the counterclockwise side of its first ray.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConvexCone {
    Zero,
    Ray(LatticeVector),
    Line(LatticeVector),
    /// Rays from `a` to `b` counterclockwise, angle in (0, pi].
    Sector(LatticeVector, LatticeVector),
    Plane,
}

impl ConvexCone {
    /// Convex hull of the given rays (rank 1 or 2 vectors; zero vectors are
    /// ignored).
    pub fn hull(rank: usize, generators: &[LatticeVector]) -> ConvexCone {
        let mut gens: Vec<LatticeVector> = Vec::new();
        for g in generators {
            if g.is_zero() {
                continue;
            }
            let p = g.primitive();
            if !gens.contains(&p) {
                gens.push(p);
            }
        }
        if gens.is_empty() {
            return ConvexCone::Zero;
        }
        if rank == 1 {
            let pos = gens.iter().any(|g| g.coord(0) > 0);
            let neg = gens.iter().any(|g| g.coord(0) < 0);
            return match (pos, neg) {
                (true, true) => ConvexCone::Line(LatticeVector::new(vec![1])),
                (true, false) => ConvexCone::Ray(LatticeVector::new(vec![1])),
                (false, true) => ConvexCone::Ray(LatticeVector::new(vec![-1])),
                (false, false) => unreachable!(),
            };
        }
        assert_eq!(rank, 2);
        if gens.len() == 1 {
            return ConvexCone::Ray(gens[0].clone());
        }
        // Deduplicated primitives that are pairwise collinear span a line.
        if gens.windows(2).all(|w| w[0].cross2(&w[1]) == 0) {
            return ConvexCone::Line(gens[0].clone());
        }
        // Look for an ordered boundary pair (a, b) with every generator in
        // the closed ccw sector from a to b of angle <= pi.
        for a in &gens {
            for b in &gens {
                if a == b && gens.len() > 1 {
                    continue;
                }
                let ok_angle = a.cross2(b) > 0 || (a.cross2(b) == 0 && *a != *b);
                if !ok_angle {
                    continue;
                }
                if gens
                    .iter()
                    .all(|x| a.cross2(x) >= 0 && x.cross2(b) >= 0)
                {
                    return ConvexCone::Sector(a.clone(), b.clone());
                }
            }
        }
        ConvexCone::Plane
    }

    pub fn contains(&self, v: &LatticeVector) -> bool {
        if v.is_zero() {
            return true;
        }
        match self {
            ConvexCone::Zero => false,
            ConvexCone::Ray(a) => {
                if a.rank() == 1 {
                    a.coord(0) * v.coord(0) > 0
                } else {
                    a.cross2(v) == 0 && a.dot(v) > 0
                }
            }
            ConvexCone::Line(a) => {
                if a.rank() == 1 {
                    true
                } else {
                    a.cross2(v) == 0
                }
            }
            ConvexCone::Sector(a, b) => a.cross2(v) >= 0 && v.cross2(b) >= 0,
            ConvexCone::Plane => true,
        }
    }

    /// Boundary rays (empty for Zero and Plane).
    pub fn boundary_rays(&self) -> Vec<LatticeVector> {
        match self {
            ConvexCone::Zero | ConvexCone::Plane => Vec::new(),
            ConvexCone::Ray(a) => vec![a.clone()],
            ConvexCone::Line(a) => vec![a.clone(), a.neg()],
            ConvexCone::Sector(a, b) => vec![a.clone(), b.clone()],
        }
    }

    pub fn negated(&self) -> ConvexCone {
        match self {
            ConvexCone::Zero => ConvexCone::Zero,
            ConvexCone::Plane => ConvexCone::Plane,
            ConvexCone::Ray(a) => ConvexCone::Ray(a.neg()),
            ConvexCone::Line(a) => ConvexCone::Line(a.clone()),
            ConvexCone::Sector(a, b) => ConvexCone::Sector(b.neg(), a.neg()),
        }
    }

    /// Is this cone contained in the union of the given cones? Exact, via
    /// angular event subdivision (rank <= 2).
    pub fn contained_in_union(&self, pieces: &[ConvexCone]) -> bool {
        let rank = match self {
            ConvexCone::Zero => return true,
            ConvexCone::Ray(a) | ConvexCone::Line(a) | ConvexCone::Sector(a, _) => a.rank(),
            ConvexCone::Plane => 2,
        };
        let in_union = |v: &LatticeVector| pieces.iter().any(|p| p.contains(v));
        if rank == 1 {
            return self.boundary_rays().iter().all(in_union);
        }
        // Event rays: our boundary plus every piece boundary ray inside us.
        // Between consecutive events the union membership is constant, so a
        // single interior test direction per gap decides it.
        let mut events: Vec<LatticeVector> = self.boundary_rays();
        for p in pieces {
            for r in p.boundary_rays() {
                if self.contains(&r) {
                    events.push(r.primitive());
                }
            }
        }
        if events.is_empty() {
            // Self is the plane and no piece has boundary: seed two events.
            events.push(LatticeVector::new(vec![1, 0]));
            events.push(LatticeVector::new(vec![-1, 0]));
        }
        events.sort_by(ccw_cmp);
        events.dedup();
        if events.iter().any(|e| !in_union(e)) {
            return false;
        }
        let n = events.len();
        for i in 0..n {
            let a = &events[i];
            let b = &events[(i + 1) % n];
            // A direction strictly inside the ccw gap from a to b.
            let mid = if a.cross2(b) > 0 {
                a.add(b)
            } else {
                // Gap of angle >= pi (or full circle when n == 1): the ccw
                // quarter turn of a is strictly inside.
                LatticeVector::new(vec![-a.coord(1), a.coord(0)])
            };
            let mid = mid.primitive();
            if self.contains(&mid) && !in_union(&mid) {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn lv(c: &[i128]) -> LatticeVector {
        LatticeVector::new(c.to_vec())
    }

    #[test]
    fn primitivity_and_content() {
        assert!(lv(&[1, 0]).is_primitive());
        assert!(lv(&[-1, -1]).is_primitive());
        assert!(!lv(&[2, 0]).is_primitive());
        assert_eq!(lv(&[4, 6]).content(), 2);
        assert_eq!(lv(&[4, 6]).primitive(), lv(&[2, 3]));
        assert_eq!(lv(&[0, 0]).content(), 0);
    }

    #[test]
    fn dets() {
        assert_eq!(det(&[lv(&[1, 0]), lv(&[0, 1])]), 1);
        assert_eq!(det(&[lv(&[1, 0]), lv(&[1, 2])]), 2);
        assert_eq!(
            det(&[
                lv(&[1, 0, 0, 0]),
                lv(&[0, 1, 0, 0]),
                lv(&[0, 0, 1, 1]),
                lv(&[0, 0, 0, 1])
            ]),
            1
        );
    }

    #[test]
    fn minor_gcd_detects_nonextendable_rays() {
        // (1,2) alone extends to a basis; (2,4) does not.
        assert_eq!(maximal_minor_gcd(&[lv(&[1, 2])]), 1);
        assert_eq!(maximal_minor_gcd(&[lv(&[2, 4])]), 2);
        assert_eq!(maximal_minor_gcd(&[lv(&[1, 0]), lv(&[1, 2])]), 2);
    }

    #[test]
    fn ccw_order_is_total_on_rays() {
        let mut rays = vec![
            lv(&[-1, -1]),
            lv(&[1, 0]),
            lv(&[0, -1]),
            lv(&[0, 1]),
            lv(&[1, 1]),
        ];
        rays.sort_by(ccw_cmp);
        assert_eq!(
            rays,
            vec![
                lv(&[1, 0]),
                lv(&[1, 1]),
                lv(&[0, 1]),
                lv(&[-1, -1]),
                lv(&[0, -1]),
            ]
        );
    }

    #[test]
    fn lattice_reduction() {
        let p = RatPoint::new(vec![ratio(-3, 2), ratio(7, 4)]);
        let (r, s) = p.reduce_mod_lattice();
        assert_eq!(r, RatPoint::new(vec![ratio(1, 2), ratio(3, 4)]));
        assert_eq!(s, lv(&[-2, 1]));
        assert_eq!(r.add_lattice(&s), p);
    }

    #[test]
    fn basis_extension() {
        let b = extend_to_basis(&[lv(&[2, 3])], 2).unwrap();
        assert_eq!(det(&b).abs(), 1);
        assert!(extend_to_basis(&[lv(&[2, 4])], 2).is_none());
    }

    #[test]
    fn integral_solve() {
        // x * rows = b over the rows of a unimodular matrix.
        let rows = [lv(&[1, 1]), lv(&[0, 1])];
        let x = solve_integer_left(&rows, &lv(&[3, 5])).unwrap();
        assert_eq!(x, lv(&[3, 2]));
    }
}
