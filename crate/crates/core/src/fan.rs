//! Cones and fans in the dual lattice N, with the combinatorial operations
//! the rest of the toolkit is built on.
//!
//! All cones here are simplicial and strongly convex: a cone is stored by
//! its primitive generators, sorted lexicographically, so equality of cones
//! is equality of generator sequences. Faces of a simplicial cone are the
//! subsets of its generators.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::CccError;
use crate::lattice::{ccw_cmp, maximal_minor_gcd, LatticeVector};
use crate::polyhedra::{HalfSpace, LCPolyhedron};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cone {
    rank: usize,
    generators: Vec<LatticeVector>,
}

impl Cone {
    /// The zero cone {0}.
    pub fn zero(rank: usize) -> Self {
        Cone {
            rank,
            generators: Vec::new(),
        }
    }

    /// Build a cone from generators; they are primitivized, deduplicated and
    /// sorted. Returns an error when the generators are not linearly
    /// independent (only simplicial cones are supported).
    pub fn new(rank: usize, generators: &[LatticeVector]) -> Result<Self, CccError> {
        let mut gens: Vec<LatticeVector> = Vec::new();
        for g in generators {
            if g.rank() != rank {
                return Err(CccError::Argument("generator rank mismatch".to_string()));
            }
            if g.is_zero() {
                return Err(CccError::Argument(
                    "zero vector cannot generate a cone".to_string(),
                ));
            }
            let p = g.primitive();
            if !gens.contains(&p) {
                gens.push(p);
            }
        }
        gens.sort();
        if gens.len() > rank {
            return Err(CccError::Argument(
                "more generators than the ambient rank".to_string(),
            ));
        }
        if maximal_minor_gcd_nonzero(&gens) == 0 {
            return Err(CccError::Argument(
                "generators are linearly dependent".to_string(),
            ));
        }
        Ok(Cone {
            rank,
            generators: gens,
        })
    }

    pub fn ray(v: &LatticeVector) -> Self {
        Cone {
            rank: v.rank(),
            generators: vec![v.primitive()],
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[LatticeVector] {
        &self.generators
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    /// Is `face` a face of self? For simplicial cones: generator subset.
    pub fn has_face(&self, face: &Cone) -> bool {
        face.generators
            .iter()
            .all(|g| self.generators.contains(g))
    }

    /// All faces, including the zero cone and self.
    pub fn faces(&self) -> Vec<Cone> {
        let k = self.generators.len();
        let mut out = Vec::with_capacity(1 << k);
        for mask in 0u32..(1 << k) {
            let gens: Vec<LatticeVector> = (0..k)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| self.generators[i].clone())
                .collect();
            out.push(Cone {
                rank: self.rank,
                generators: gens,
            });
        }
        out
    }

    /// Generators extend to a lattice basis.
    pub fn is_smooth_cone(&self) -> bool {
        maximal_minor_gcd(&self.generators) == 1
    }

    /// The dual cone as a half-space intersection in M_R. Strictness flags
    /// all set to `strict` (false gives the closed dual, true its interior).
    pub fn dual(&self, strict: bool) -> LCPolyhedron {
        let halves: Vec<HalfSpace> = self
            .generators
            .iter()
            .map(|g| HalfSpace::new(g.clone(), 0, strict))
            .collect();
        LCPolyhedron::from_halfspaces(self.rank, halves)
    }

    /// Exact membership of a lattice point in the closed cone (rank <= 2).
    pub fn contains(&self, v: &LatticeVector) -> bool {
        assert!(self.rank <= 2, "membership test implemented for rank <= 2");
        if v.is_zero() {
            return true;
        }
        match self.generators.len() {
            0 => false,
            1 => {
                let g = &self.generators[0];
                if self.rank == 1 {
                    g.coord(0) * v.coord(0) > 0
                } else {
                    g.cross2(v) == 0 && g.dot(v) > 0
                }
            }
            2 => {
                // v = a g0 + b g1 with a, b >= 0.
                let g0 = &self.generators[0];
                let g1 = &self.generators[1];
                let d = g0.cross2(g1);
                let a_num = v.cross2(g1);
                let b_num = g0.cross2(v);
                if d > 0 {
                    a_num >= 0 && b_num >= 0
                } else {
                    a_num <= 0 && b_num <= 0
                }
            }
            _ => unreachable!(),
        }
    }

    /// Strict interior membership, rank 2, for 2-dimensional cones.
    pub fn contains_interior(&self, v: &LatticeVector) -> bool {
        assert!(self.rank == 2 && self.dim() == 2);
        let g0 = &self.generators[0];
        let g1 = &self.generators[1];
        let d = g0.cross2(g1);
        let a_num = v.cross2(g1);
        let b_num = g0.cross2(v);
        if d > 0 {
            a_num > 0 && b_num > 0
        } else {
            a_num < 0 && b_num < 0
        }
    }

    /// Product cone inside the concatenated lattice.
    pub fn product(&self, other: &Cone) -> Cone {
        let rank = self.rank + other.rank;
        let mut gens = Vec::new();
        for g in &self.generators {
            gens.push(g.concat(&LatticeVector::zero(other.rank)));
        }
        for g in &other.generators {
            gens.push(LatticeVector::zero(self.rank).concat(g));
        }
        gens.sort();
        Cone {
            rank,
            generators: gens,
        }
    }

    /// Intersection of two cones of a common valid fan, rank <= 2 only.
    pub fn intersect(&self, other: &Cone) -> Result<Cone, CccError> {
        if self.rank > 2 {
            return Err(CccError::UnsupportedRank {
                got: self.rank,
                max: 2,
            });
        }
        // In a valid fan the intersection is the largest common face.
        let common: Vec<LatticeVector> = self
            .generators
            .iter()
            .filter(|g| other.generators.contains(g))
            .cloned()
            .collect();
        Ok(Cone {
            rank: self.rank,
            generators: common,
        })
    }
}

fn maximal_minor_gcd_nonzero(gens: &[LatticeVector]) -> i128 {
    if gens.is_empty() {
        return 1;
    }
    maximal_minor_gcd(gens)
}

/// A fan: rays plus the full set of cones, closed under faces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    rank: usize,
    rays: Vec<LatticeVector>,
    cones: Vec<Cone>,
}

impl Fan {
    /// The fan containing only the zero cone.
    pub fn zero(rank: usize) -> Self {
        Fan {
            rank,
            rays: Vec::new(),
            cones: vec![Cone::zero(rank)],
        }
    }

    /// Build a fan from its maximal cones; faces are completed, rays are
    /// collected, and the result is validated.
    pub fn from_max_cones(rank: usize, max_cones: Vec<Cone>) -> Result<Self, CccError> {
        let mut cone_set: BTreeSet<Cone> = BTreeSet::new();
        cone_set.insert(Cone::zero(rank));
        for c in &max_cones {
            if c.rank() != rank {
                return Err(CccError::MalformedFan("cone rank mismatch".to_string()));
            }
            for f in c.faces() {
                cone_set.insert(f);
            }
        }
        let cones: Vec<Cone> = cone_set.into_iter().collect();
        let rays: Vec<LatticeVector> = cones
            .iter()
            .filter(|c| c.dim() == 1)
            .map(|c| c.generators[0].clone())
            .collect();
        let fan = Fan { rank, rays, cones };
        fan.validate()?;
        Ok(fan)
    }

    /// Convenience constructor from rays and maximal cones as ray-index lists
    /// (the shape of the fan file format).
    pub fn from_rays_and_cones(
        rank: usize,
        rays: &[LatticeVector],
        max_cones: &[Vec<usize>],
    ) -> Result<Self, CccError> {
        for r in rays {
            if !r.is_primitive() {
                return Err(CccError::MalformedFan(format!(
                    "ray {r:?} is not primitive"
                )));
            }
        }
        let mut cones = Vec::new();
        if max_cones.is_empty() {
            // A fan with rays but no listed cones: the rays themselves.
            for r in rays {
                cones.push(Cone::ray(r));
            }
        }
        for idxs in max_cones {
            let gens: Vec<LatticeVector> = idxs
                .iter()
                .map(|i| {
                    rays.get(*i)
                        .cloned()
                        .ok_or_else(|| CccError::MalformedFan(format!("ray index {i} out of range")))
                })
                .collect::<Result<_, _>>()?;
            cones.push(Cone::new(rank, &gens).map_err(|e| match e {
                CccError::Argument(m) => CccError::MalformedFan(m),
                other => other,
            })?);
        }
        let fan = Fan::from_max_cones(rank, cones)?;
        // Every listed ray must actually appear.
        for r in rays {
            if !fan.rays.contains(&r.primitive()) {
                return Err(CccError::MalformedFan(format!(
                    "ray {r:?} is not used by any cone"
                )));
            }
        }
        Ok(fan)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    pub fn cones_of_dim(&self, d: usize) -> impl Iterator<Item = &Cone> {
        self.cones.iter().filter(move |c| c.dim() == d)
    }

    pub fn contains_cone(&self, c: &Cone) -> bool {
        self.cones.contains(c)
    }

    /// Cones that are not proper faces of another cone.
    pub fn maximal_cones(&self) -> Vec<&Cone> {
        self.cones
            .iter()
            .filter(|c| {
                !self
                    .cones
                    .iter()
                    .any(|d| d.dim() > c.dim() && d.has_face(c))
            })
            .collect()
    }

    pub fn is_subfan_of(&self, other: &Fan) -> bool {
        self.rank == other.rank && self.cones.iter().all(|c| other.contains_cone(c))
    }

    /// Structural validity: face closure, ray list, primitivity, and (in
    /// rank <= 2) that cones meet along common faces.
    pub fn validate(&self) -> Result<(), CccError> {
        if !self.cones.contains(&Cone::zero(self.rank)) {
            return Err(CccError::MalformedFan("missing zero cone".to_string()));
        }
        for c in &self.cones {
            for f in c.faces() {
                if !self.cones.contains(&f) {
                    return Err(CccError::MalformedFan(format!(
                        "face {f:?} of {c:?} missing"
                    )));
                }
            }
            for g in c.generators() {
                if !g.is_primitive() {
                    return Err(CccError::MalformedFan(format!(
                        "non-primitive generator {g:?}"
                    )));
                }
            }
        }
        let ray_cones: BTreeSet<&LatticeVector> = self
            .cones
            .iter()
            .filter(|c| c.dim() == 1)
            .map(|c| &c.generators[0])
            .collect();
        if ray_cones.len() != self.rays.len()
            || !self.rays.iter().all(|r| ray_cones.contains(r))
        {
            return Err(CccError::MalformedFan(
                "ray list does not match 1-cones".to_string(),
            ));
        }
        if self.rank <= 2 {
            self.validate_overlaps_rank2()?;
        }
        Ok(())
    }

    fn validate_overlaps_rank2(&self) -> Result<(), CccError> {
        if self.rank == 1 {
            // Distinct rays in rank 1 are +-1 and meet at 0 only.
            return Ok(());
        }
        let two: Vec<&Cone> = self.cones.iter().filter(|c| c.dim() == 2).collect();
        // No ray may pass through the interior of a 2-cone.
        for c in &two {
            for r in &self.rays {
                if c.contains_interior(r) && !c.generators().contains(r) {
                    return Err(CccError::MalformedFan(format!(
                        "ray {r:?} meets the interior of {c:?}"
                    )));
                }
            }
        }
        // 2-cones intersect in a common face.
        for (i, c) in two.iter().enumerate() {
            for d in two.iter().skip(i + 1) {
                if !sectors_meet_in_face(c, d) {
                    return Err(CccError::MalformedFan(format!(
                        "cones {c:?} and {d:?} overlap improperly"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Do two distinct 2-cones in the plane intersect along a common face?
fn sectors_meet_in_face(c: &Cone, d: &Cone) -> bool {
    // Orient both counterclockwise.
    let or = |k: &Cone| -> (LatticeVector, LatticeVector) {
        let (a, b) = (k.generators()[0].clone(), k.generators()[1].clone());
        if a.cross2(&b) > 0 {
            (a, b)
        } else {
            (b, a)
        }
    };
    let (a0, a1) = or(c);
    let (b0, b1) = or(d);
    let inside_strict = |a: &LatticeVector, b: &LatticeVector, v: &LatticeVector| -> bool {
        a.cross2(v) > 0 && v.cross2(b) > 0
    };
    // Improper overlap happens iff one cone's boundary ray lies strictly
    // inside the other or they share the full sector.
    if inside_strict(&a0, &a1, &b0)
        || inside_strict(&a0, &a1, &b1)
        || inside_strict(&b0, &b1, &a0)
        || inside_strict(&b0, &b1, &a1)
    {
        return false;
    }
    true
}

/// Every cone's generators extend to a lattice basis.
pub fn is_smooth(fan: &Fan) -> bool {
    fan.cones().iter().all(|c| c.is_smooth_cone())
}

/// Does the support of the fan cover all of N_R? Decided by cyclic ray
/// order in rank 2; rank > 2 is rejected.
pub fn is_complete(fan: &Fan) -> Result<bool, CccError> {
    match fan.rank() {
        0 => Ok(true),
        1 => {
            let pos = LatticeVector::new(vec![1]);
            let neg = LatticeVector::new(vec![-1]);
            Ok(fan.rays().contains(&pos) && fan.rays().contains(&neg))
        }
        2 => {
            let mut rays = fan.rays().to_vec();
            if rays.len() < 3 {
                return Ok(false);
            }
            rays.sort_by(ccw_cmp);
            for i in 0..rays.len() {
                let a = &rays[i];
                let b = &rays[(i + 1) % rays.len()];
                // The ccw gap between cyclically adjacent rays must be < pi
                // (cross > 0) and spanned by a cone of the fan.
                if a.cross2(b) <= 0 {
                    return Ok(false);
                }
                let cone = Cone::new(2, &[a.clone(), b.clone()]).expect("cross > 0");
                if !fan.contains_cone(&cone) {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        r => Err(CccError::UnsupportedRank { got: r, max: 2 }),
    }
}

/// The dual cone sigma^vee (closed), or its interior when `strict`.
pub fn polar_dual(cone: &Cone, strict: bool) -> LCPolyhedron {
    cone.dual(strict)
}

/// Subfan of all cones not containing the ray as a face.
pub fn star_removal(fan: &Fan, ray: &LatticeVector) -> Result<Fan, CccError> {
    let r = ray.primitive();
    if !fan.rays().contains(&r) {
        return Err(CccError::Argument(format!("{r:?} is not a ray of the fan")));
    }
    let cones: Vec<Cone> = fan
        .cones()
        .iter()
        .filter(|c| !c.generators().contains(&r))
        .cloned()
        .collect();
    let rays: Vec<LatticeVector> = cones
        .iter()
        .filter(|c| c.dim() == 1)
        .map(|c| c.generators()[0].clone())
        .collect();
    let out = Fan {
        rank: fan.rank(),
        rays,
        cones,
    };
    out.validate()?;
    Ok(out)
}

/// Product fan inside the concatenated lattice.
pub fn product(a: &Fan, b: &Fan) -> Fan {
    let rank = a.rank() + b.rank();
    let mut cones = Vec::new();
    for c in a.cones() {
        for d in b.cones() {
            cones.push(c.product(d));
        }
    }
    cones.sort();
    cones.dedup();
    let rays: Vec<LatticeVector> = cones
        .iter()
        .filter(|c| c.dim() == 1)
        .map(|c| c.generators()[0].clone())
        .collect();
    Fan { rank, rays, cones }
}

/// Ready-made fans used across tests and demos.
pub mod corpus {
    use super::*;

    fn lv(c: &[i128]) -> LatticeVector {
        LatticeVector::new(c.to_vec())
    }

    pub fn p1() -> Fan {
        Fan::from_rays_and_cones(1, &[lv(&[1]), lv(&[-1])], &[vec![0], vec![1]]).unwrap()
    }

    pub fn a1() -> Fan {
        Fan::from_rays_and_cones(1, &[lv(&[1])], &[vec![0]]).unwrap()
    }

    pub fn a2() -> Fan {
        Fan::from_rays_and_cones(2, &[lv(&[1, 0]), lv(&[0, 1])], &[vec![0, 1]]).unwrap()
    }

    pub fn p2() -> Fan {
        Fan::from_rays_and_cones(
            2,
            &[lv(&[1, 0]), lv(&[0, 1]), lv(&[-1, -1])],
            &[vec![0, 1], vec![1, 2], vec![2, 0]],
        )
        .unwrap()
    }

    pub fn p1xp1() -> Fan {
        Fan::from_rays_and_cones(
            2,
            &[lv(&[1, 0]), lv(&[0, 1]), lv(&[-1, 0]), lv(&[0, -1])],
            &[vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]],
        )
        .unwrap()
    }

    /// Hirzebruch surface F_a.
    pub fn hirzebruch(a: i128) -> Fan {
        Fan::from_rays_and_cones(
            2,
            &[lv(&[1, 0]), lv(&[0, 1]), lv(&[-1, a]), lv(&[0, -1])],
            &[vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]],
        )
        .unwrap()
    }

    /// Blowup of P^2 at one torus-fixed point.
    pub fn bl1_p2() -> Fan {
        Fan::from_rays_and_cones(
            2,
            &[lv(&[1, 0]), lv(&[0, 1]), lv(&[1, 1]), lv(&[-1, -1])],
            &[vec![0, 2], vec![2, 1], vec![1, 3], vec![3, 0]],
        )
        .unwrap()
    }

    /// Blowup of P^2 at two torus-fixed points.
    pub fn bl2_p2() -> Fan {
        Fan::from_rays_and_cones(
            2,
            &[
                lv(&[1, 0]),
                lv(&[0, 1]),
                lv(&[1, 1]),
                lv(&[-1, -1]),
                lv(&[-1, 0]),
            ],
            &[vec![0, 2], vec![2, 1], vec![1, 4], vec![4, 3], vec![3, 0]],
        )
        .unwrap()
    }

    /// The complete smooth corpus, with names.
    pub fn complete_corpus() -> Vec<(&'static str, Fan)> {
        vec![
            ("P1", p1()),
            ("P2", p2()),
            ("P1xP1", p1xp1()),
            ("F1", hirzebruch(1)),
            ("F2", hirzebruch(2)),
            ("Bl1P2", bl1_p2()),
            ("Bl2P2", bl2_p2()),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(c: &[i128]) -> LatticeVector {
        LatticeVector::new(c.to_vec())
    }

    #[test]
    fn smoothness_by_determinant() {
        assert!(is_smooth(&corpus::p2()));
        assert!(is_smooth(&Fan::zero(2)));
        let bad = Fan::from_rays_and_cones(2, &[lv(&[1, 0]), lv(&[1, 2])], &[vec![0, 1]]).unwrap();
        assert!(!is_smooth(&bad));
    }

    #[test]
    fn completeness() {
        assert!(is_complete(&corpus::p2()).unwrap());
        assert!(is_complete(&corpus::p1()).unwrap());
        assert!(!is_complete(&corpus::a2()).unwrap());
        assert!(!is_complete(&corpus::a1()).unwrap());
        for (_, fan) in corpus::complete_corpus() {
            assert!(is_complete(&fan).unwrap());
            assert!(is_smooth(&fan));
        }
        let r3 = product(&corpus::p1(), &corpus::a2());
        assert!(matches!(
            is_complete(&r3),
            Err(CccError::UnsupportedRank { .. })
        ));
    }

    #[test]
    fn face_closure_always_holds() {
        for (_, fan) in corpus::complete_corpus() {
            fan.validate().unwrap();
        }
    }

    #[test]
    fn star_removal_examples() {
        // P1 minus the +1 ray is the A1 fan.
        let f = star_removal(&corpus::p1(), &lv(&[1])).unwrap();
        assert_eq!(f.rays(), &[lv(&[-1])]);
        assert_eq!(f.cones().len(), 2);

        // P2 minus (-1,-1) is the quadrant fan.
        let f = star_removal(&corpus::p2(), &lv(&[-1, -1])).unwrap();
        assert_eq!(f, corpus::a2());
        assert!(!is_complete(&f).unwrap());

        // A2 minus (1,0) keeps the zero cone and the (0,1) ray.
        let f = star_removal(&corpus::a2(), &lv(&[1, 0])).unwrap();
        assert_eq!(f.rays(), &[lv(&[0, 1])]);
        assert_eq!(f.cones().len(), 2);

        assert!(star_removal(&corpus::p2(), &lv(&[5, 3])).is_err());
    }

    #[test]
    fn star_removal_commutes_and_is_idempotent() {
        let fan = corpus::bl2_p2();
        for r in fan.rays() {
            let once = star_removal(&fan, r).unwrap();
            assert!(!once.rays().contains(r));
            for s in fan.rays() {
                if s == r || !once.rays().contains(s) {
                    continue;
                }
                let ab = star_removal(&once, s).unwrap();
                let ba = star_removal(&star_removal(&fan, s).unwrap(), r).unwrap();
                assert_eq!(ab, ba);
            }
        }
    }

    #[test]
    fn products() {
        let p1p1 = product(&corpus::p1(), &corpus::p1());
        assert_eq!(p1p1, corpus::p1xp1());
        assert!(is_smooth(&p1p1));
        assert!(is_complete(&p1p1).unwrap());

        let a2 = product(&corpus::a1(), &corpus::a1());
        assert_eq!(a2, corpus::a2());

        let same = product(&corpus::p2(), &Fan::zero(0));
        assert_eq!(same, corpus::p2());

        // Smoothness and completeness distribute over products.
        let bad = Fan::from_rays_and_cones(2, &[lv(&[1, 0]), lv(&[1, 2])], &[vec![0, 1]]).unwrap();
        assert!(!is_smooth(&product(&bad, &corpus::p1())));
        assert!(is_smooth(&product(&corpus::p2(), &corpus::p1())));
    }

    #[test]
    fn invalid_fans_are_rejected() {
        // Overlapping 2-cones.
        let r = Fan::from_rays_and_cones(
            2,
            &[lv(&[1, 0]), lv(&[0, 1]), lv(&[1, 1])],
            &[vec![0, 1], vec![0, 2]],
        );
        assert!(r.is_err());
        // Non-primitive ray.
        let r = Fan::from_rays_and_cones(2, &[lv(&[2, 0]), lv(&[0, 1])], &[vec![0, 1]]);
        assert!(r.is_err());
    }
}
