//! The conic Lagrangian skeleton of a fan: one component per cone, each a
//! subtorus of T^n carrying the negated cone as its conormal directions.

use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::CccError;
use crate::fan::{Cone, Fan};
use crate::lattice::{rat, rat_floor, ConvexCone, LatticeVector, Rat, RatPoint};

/// One component p(sigma-perp) x (-sigma) of the skeleton.
#[derive(Clone, Debug)]
pub struct SkeletonComponent {
    pub cone: Cone,
    /// The covector cone -sigma over the subtorus.
    pub conormal: ConvexCone,
}

/// The full skeleton of a fan.
#[derive(Clone, Debug)]
pub struct Skeleton {
    pub rank: usize,
    pub components: Vec<SkeletonComponent>,
}

/// Build the skeleton: one component per cone of the fan.
pub fn build_skeleton(fan: &Fan) -> Result<Skeleton, CccError> {
    if fan.rank() > 2 {
        return Err(CccError::UnsupportedRank {
            got: fan.rank(),
            max: 2,
        });
    }
    let components = fan
        .cones()
        .iter()
        .map(|c| SkeletonComponent {
            cone: c.clone(),
            conormal: ConvexCone::hull(
                fan.rank(),
                &c.generators().iter().map(|g| g.neg()).collect::<Vec<_>>(),
            ),
        })
        .collect();
    Ok(Skeleton {
        rank: fan.rank(),
        components,
    })
}

impl Skeleton {
    /// Does the subtorus p(sigma-perp) of a component contain the point?
    pub fn component_contains(&self, component: &SkeletonComponent, point: &RatPoint) -> bool {
        // [m] lies on p(sigma-perp) iff <m, g> is an integer for every
        // generator g of sigma.
        component.cone.generators().iter().all(|g| {
            let v = g.dot_rat(point);
            (v.clone() - rat(rat_floor(&v))).is_zero()
        })
    }

    /// The union of conormal cones over the point: the skeleton fiber.
    pub fn fiber(&self, point: &RatPoint) -> Vec<ConvexCone> {
        self.components
            .iter()
            .filter(|c| self.component_contains(c, point))
            .map(|c| c.conormal.clone())
            .collect()
    }

    /// Is the covector allowed at the point (contained in some component's
    /// conormal cone there)?
    pub fn allows(&self, point: &RatPoint, covector: &LatticeVector) -> bool {
        if covector.is_zero() {
            return true;
        }
        self.components
            .iter()
            .any(|c| self.component_contains(c, point) && c.conormal.contains(covector))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::corpus;
    use crate::lattice::ratio;

    fn lv(c: &[i128]) -> LatticeVector {
        LatticeVector::new(c.to_vec())
    }

    #[test]
    fn zero_fan_skeleton_is_the_zero_section() {
        let sk = build_skeleton(&crate::fan::Fan::zero(2)).unwrap();
        assert_eq!(sk.components.len(), 1);
        assert_eq!(sk.components[0].conormal, ConvexCone::Zero);
        let p = RatPoint::new(alloc::vec![ratio(1, 3), ratio(1, 5)]);
        assert!(!sk.allows(&p, &lv(&[1, 0])));
        assert!(sk.allows(&p, &lv(&[0, 0])));
    }

    #[test]
    fn p1_skeleton_has_full_fiber_at_zero() {
        let sk = build_skeleton(&corpus::p1()).unwrap();
        assert_eq!(sk.components.len(), 3);
        let origin = RatPoint::from_ints(&[0]);
        assert!(sk.allows(&origin, &lv(&[1])));
        assert!(sk.allows(&origin, &lv(&[-1])));
        let generic = RatPoint::new(alloc::vec![ratio(1, 3)]);
        assert!(!sk.allows(&generic, &lv(&[1])));
        assert!(!sk.allows(&generic, &lv(&[-1])));
    }

    #[test]
    fn p2_fibers() {
        let sk = build_skeleton(&corpus::p2()).unwrap();
        // A generic point sees only the zero covector.
        let generic = RatPoint::new(alloc::vec![ratio(1, 7), ratio(2, 5)]);
        assert_eq!(sk.fiber(&generic).len(), 1);
        // A point on exactly the (1,0)-perp circle allows -(1,0) only.
        let on_wall = RatPoint::new(alloc::vec![Rat::zero(), ratio(1, 3)]);
        assert!(sk.allows(&on_wall, &lv(&[-1, 0])));
        assert!(!sk.allows(&on_wall, &lv(&[1, 0])));
        assert!(!sk.allows(&on_wall, &lv(&[0, 1])));
        // The origin sees every covector: the three 2-cones cover N_R.
        let origin = RatPoint::from_ints(&[0, 0]);
        for xi in [lv(&[1, 0]), lv(&[-3, 2]), lv(&[5, 5]), lv(&[0, -1])] {
            assert!(sk.allows(&origin, &xi));
        }
        // Subfan skeletons embed: every A2 component cone also appears in
        // the P2 skeleton with the same conormal.
        let sub = build_skeleton(&corpus::a2()).unwrap();
        for c in &sub.components {
            assert!(sk
                .components
                .iter()
                .any(|d| d.cone == c.cone && d.conormal == c.conormal));
        }
    }
}
