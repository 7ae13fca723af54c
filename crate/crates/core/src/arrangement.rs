//! Exact cell complexes from line arrangements.
//!
//! Two builders share this module: finite affine arrangements in M_R
//! (rank 1 and 2), used by the upstairs sheaf calculus, and the induced
//! cell decomposition of the torus T^n = M_R/M, whose incidences carry
//! lattice-shift decorations so that the covering-space combinatorics
//! stays finite.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::error::CccError;
use crate::fan::Fan;
use crate::lattice::{rat, rat_floor, LatticeVector, Rat, RatPoint};
use crate::polyhedra::LCPolyhedron;

/// The line {m : <m, normal> = level}; normals are primitive with
/// lexicographically positive sign.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Line {
    pub normal: LatticeVector,
    pub level: Rat,
}

impl Line {
    pub fn new(normal: LatticeVector, level: Rat) -> Self {
        // Scaled normals carry their scale into the level.
        let content = normal.content();
        let normal = normal.primitive();
        let level = level / rat(content);
        let flip = normal
            .coords()
            .iter()
            .find(|c| **c != 0)
            .map(|c| *c < 0)
            .unwrap_or(false);
        if flip {
            Line {
                normal: normal.neg(),
                level: -level,
            }
        } else {
            Line { normal, level }
        }
    }

    /// Direction vector of the line (rank 2).
    pub fn direction(&self) -> LatticeVector {
        LatticeVector::new(vec![-self.normal.coord(1), self.normal.coord(0)])
    }

    pub fn eval(&self, p: &RatPoint) -> Rat {
        self.normal.dot_rat(p) - &self.level
    }
}

fn line_intersection(a: &Line, b: &Line) -> Option<RatPoint> {
    let d = a.normal.cross2(&b.normal);
    if d == 0 {
        return None;
    }
    let x = (&a.level * rat(b.normal.coord(1)) - &b.level * rat(a.normal.coord(1))) / rat(d);
    let y = (rat(a.normal.coord(0)) * &b.level - rat(b.normal.coord(0)) * &a.level) / rat(d);
    Some(RatPoint::new(vec![x, y]))
}

/// A cell of an affine arrangement: its dimension and an exact interior
/// sample point (cells of a line arrangement are determined by a sample).
#[derive(Clone, Debug)]
pub struct AffCell {
    pub dim: usize,
    pub sample: RatPoint,
    /// Sign of each line at the cell: -1, 0, +1.
    pub signs: Vec<i8>,
}

/// A finite affine line arrangement with its full cell complex, including
/// unbounded cells, plus signed covering incidences for cochain calculus.
#[derive(Clone, Debug)]
pub struct AffineArrangement {
    pub rank: usize,
    pub lines: Vec<Line>,
    pub cells: Vec<AffCell>,
    /// (lower cell, higher cell, incidence sign), dim difference one.
    pub incidences: Vec<(usize, usize, i8)>,
}

impl AffineArrangement {
    pub fn build(rank: usize, raw_lines: &[Line]) -> AffineArrangement {
        let mut lines: Vec<Line> = raw_lines.to_vec();
        lines.sort();
        lines.dedup();
        match rank {
            1 => build_rank1(lines),
            2 => build_rank2(lines),
            r => panic!("affine arrangements support rank <= 2, got {r}"),
        }
    }

    /// Ids of cells contained in the polyhedron (cells never straddle a
    /// wall as long as every wall of `z` is among the arrangement lines).
    pub fn cells_in(&self, z: &LCPolyhedron) -> Vec<usize> {
        (0..self.cells.len())
            .filter(|i| z.contains(&self.cells[*i].sample))
            .collect()
    }
}

fn signs_at(lines: &[Line], p: &RatPoint) -> Vec<i8> {
    lines
        .iter()
        .map(|l| {
            let v = l.eval(p);
            if v.is_zero() {
                0
            } else if v.is_positive() {
                1
            } else {
                -1
            }
        })
        .collect()
}

fn build_rank1(lines: Vec<Line>) -> AffineArrangement {
    // Lines in rank 1 are points on the real line.
    let mut levels: Vec<Rat> = lines
        .iter()
        .map(|l| &l.level / rat(l.normal.coord(0)))
        .collect();
    levels.sort();
    levels.dedup();
    let mut cells = Vec::new();
    let mut incidences = Vec::new();
    if levels.is_empty() {
        cells.push(AffCell {
            dim: 1,
            sample: RatPoint::new(vec![Rat::zero()]),
            signs: vec![],
        });
        return AffineArrangement {
            rank: 1,
            lines,
            cells,
            incidences,
        };
    }
    let mut vertex_ids = Vec::new();
    for lv in &levels {
        let p = RatPoint::new(vec![lv.clone()]);
        cells.push(AffCell {
            dim: 0,
            signs: signs_at(&lines, &p),
            sample: p,
        });
        vertex_ids.push(cells.len() - 1);
    }
    let mut interval_samples = Vec::new();
    interval_samples.push(levels[0].clone() - rat(1));
    for w in levels.windows(2) {
        interval_samples.push((&w[0] + &w[1]) / rat(2));
    }
    interval_samples.push(levels[levels.len() - 1].clone() + rat(1));
    for (k, s) in interval_samples.iter().enumerate() {
        let p = RatPoint::new(vec![s.clone()]);
        cells.push(AffCell {
            dim: 1,
            signs: signs_at(&lines, &p),
            sample: p,
        });
        let id = cells.len() - 1;
        // Interval k is bounded by vertex k-1 on the left (tail, sign -1)
        // and vertex k on the right (head, sign +1), orientation +x.
        if k < vertex_ids.len() {
            incidences.push((vertex_ids[k], id, 1));
        }
        if k > 0 {
            incidences.push((vertex_ids[k - 1], id, -1));
        }
    }
    AffineArrangement {
        rank: 1,
        lines,
        cells,
        incidences,
    }
}

fn build_rank2(lines: Vec<Line>) -> AffineArrangement {
    let mut cells: Vec<AffCell> = Vec::new();
    let mut incidences: Vec<(usize, usize, i8)> = Vec::new();

    if lines.is_empty() {
        cells.push(AffCell {
            dim: 2,
            sample: RatPoint::zero(2),
            signs: vec![],
        });
        return AffineArrangement {
            rank: 2,
            lines,
            cells,
            incidences,
        };
    }

    // Vertices.
    let mut vertex_set: BTreeSet<RatPoint> = BTreeSet::new();
    for (i, a) in lines.iter().enumerate() {
        for b in lines.iter().skip(i + 1) {
            if let Some(p) = line_intersection(a, b) {
                vertex_set.insert(p);
            }
        }
    }
    let vertices: Vec<RatPoint> = vertex_set.into_iter().collect();
    let mut vertex_id: BTreeMap<RatPoint, usize> = BTreeMap::new();
    for v in &vertices {
        cells.push(AffCell {
            dim: 0,
            signs: signs_at(&lines, v),
            sample: v.clone(),
        });
        vertex_id.insert(v.clone(), cells.len() - 1);
    }

    // Edges per line, oriented along the line direction.
    struct EdgeRec {
        id: usize,
        line_idx: usize,
        sample: RatPoint,
    }
    let mut edges: Vec<EdgeRec> = Vec::new();
    for (li, l) in lines.iter().enumerate() {
        let d = l.direction();
        let base = base_point_on(l);
        let mut params: Vec<Rat> = Vec::new();
        for v in &vertices {
            if l.eval(v).is_zero() {
                params.push(param_along(&base, &d, v));
            }
        }
        params.sort();
        params.dedup();
        let mut segs: Vec<(Option<Rat>, Option<Rat>)> = Vec::new();
        if params.is_empty() {
            segs.push((None, None));
        } else {
            segs.push((None, Some(params[0].clone())));
            for w in params.windows(2) {
                segs.push((Some(w[0].clone()), Some(w[1].clone())));
            }
            segs.push((Some(params[params.len() - 1].clone()), None));
        }
        for (lo, hi) in segs {
            let t = match (&lo, &hi) {
                (None, None) => Rat::zero(),
                (None, Some(h)) => h - rat(1),
                (Some(l0), None) => l0 + rat(1),
                (Some(l0), Some(h)) => (l0 + h) / rat(2),
            };
            let sample = point_at(&base, &d, &t);
            cells.push(AffCell {
                dim: 1,
                signs: signs_at(&lines, &sample),
                sample: sample.clone(),
            });
            let id = cells.len() - 1;
            edges.push(EdgeRec {
                id,
                line_idx: li,
                sample,
            });
            // Vertex incidences: tail -1, head +1 along the orientation d.
            if let Some(l0) = &lo {
                let p = point_at(&base, &d, l0);
                incidences.push((vertex_id[&p], id, -1));
            }
            if let Some(h) = &hi {
                let p = point_at(&base, &d, h);
                incidences.push((vertex_id[&p], id, 1));
            }
        }
    }

    // Faces from edge side samples; dedupe by sign vector.
    let mut face_ids: BTreeMap<Vec<i8>, usize> = BTreeMap::new();
    for e in &edges {
        let l = &lines[e.line_idx];
        let delta = side_step(&lines, &e.sample, &l.normal);
        for side in [1i128, -1i128] {
            let q = e
                .sample
                .add(&l.normal.as_rat_point().scale(&(&delta * rat(side))));
            let sv = signs_at(&lines, &q);
            debug_assert!(sv.iter().all(|s| *s != 0));
            let fid = *face_ids.entry(sv.clone()).or_insert_with(|| {
                cells.push(AffCell {
                    dim: 2,
                    signs: sv.clone(),
                    sample: q.clone(),
                });
                cells.len() - 1
            });
            // A face on the -normal side lies left of the orientation d.
            let sign = if side < 0 { 1 } else { -1 };
            incidences.push((e.id, fid, sign));
        }
    }

    AffineArrangement {
        rank: 2,
        lines,
        cells,
        incidences,
    }
}

fn base_point_on(l: &Line) -> RatPoint {
    let n = &l.normal;
    if n.coord(0) != 0 {
        RatPoint::new(vec![&l.level / rat(n.coord(0)), Rat::zero()])
    } else {
        RatPoint::new(vec![Rat::zero(), &l.level / rat(n.coord(1))])
    }
}

fn param_along(base: &RatPoint, d: &LatticeVector, p: &RatPoint) -> Rat {
    if d.coord(0) != 0 {
        (p.coord(0) - base.coord(0)) / rat(d.coord(0))
    } else {
        (p.coord(1) - base.coord(1)) / rat(d.coord(1))
    }
}

fn point_at(base: &RatPoint, d: &LatticeVector, t: &Rat) -> RatPoint {
    base.add(&d.as_rat_point().scale(t))
}

/// Half the distance (in normal-parameter units) to the nearest other line
/// crossed when moving from p along the normal; 1 when nothing is crossed.
fn side_step(lines: &[Line], p: &RatPoint, normal: &LatticeVector) -> Rat {
    let mut best: Option<Rat> = None;
    for l in lines {
        let denom = l.normal.dot(normal);
        if denom == 0 {
            continue;
        }
        let t = -l.eval(p) / rat(denom);
        if t.is_zero() {
            continue;
        }
        let a = t.abs();
        best = Some(match best {
            None => a,
            Some(b) => {
                if a < b {
                    a
                } else {
                    b
                }
            }
        });
    }
    match best {
        None => rat(1),
        Some(b) => b / rat(2),
    }
}

/// Identifier of a torus cell.
pub type CellId = usize;

/// A cell of the torus decomposition with its canonical lift.
#[derive(Clone, Debug)]
pub struct TorusCell {
    pub dim: usize,
    /// An exact point in the relative interior, reduced to [0,1)^n.
    pub sample: RatPoint,
    /// For 1-cells: index of the carrying circle. usize::MAX otherwise.
    pub circle: usize,
    /// Canonical lift geometry: the vertex (dim 0), the two lifted
    /// endpoints (dim 1), or the lifted ccw polygon cycle (dim 2).
    pub lift: Vec<RatPoint>,
}

/// A geodesic circle on the torus: the image of a family of parallel lines
/// {<m, normal> = offset + k}, k integer.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Circle {
    pub normal: LatticeVector,
    pub offset: Rat,
    /// Fan rays whose perpendicular this circle is (empty for synthetic
    /// refinement circles).
    pub carrying_rays: Vec<LatticeVector>,
}

/// Wall data of a 1-cell: the adjacent 2-cells on each side of the carrying
/// circle's normal.
#[derive(Clone, Debug)]
pub struct WallData {
    pub positive_side: CellId,
    pub negative_side: CellId,
}

/// The cell decomposition of T^n induced by a set of circles, with
/// shift-decorated incidences.
#[derive(Clone, Debug)]
pub struct StrataComplex {
    pub rank: usize,
    pub circles: Vec<Circle>,
    pub cells: Vec<TorusCell>,
    /// For every ordered face pair (lower, higher): the lattice shifts k
    /// such that lift(lower) lies in closure(lift(higher) + k).
    pub shifts: BTreeMap<(CellId, CellId), Vec<LatticeVector>>,
    pub wall_data: BTreeMap<CellId, WallData>,
}

impl StrataComplex {
    /// Euler characteristic (alternating cell count).
    pub fn euler(&self) -> i64 {
        self.cells
            .iter()
            .map(|c| if c.dim % 2 == 0 { 1i64 } else { -1 })
            .sum()
    }

    pub fn cells_of_dim(&self, d: usize) -> impl Iterator<Item = CellId> + '_ {
        self.cells
            .iter()
            .enumerate()
            .filter(move |(_, c)| c.dim == d)
            .map(|(i, _)| i)
    }

    pub fn shifts_between(&self, lower: CellId, higher: CellId) -> &[LatticeVector] {
        self.shifts
            .get(&(lower, higher))
            .map(|v| v.as_slice())
            .unwrap_or(&[])
    }

    /// The cell containing a given torus point (reduced mod M first).
    pub fn cell_containing(&self, p: &RatPoint) -> CellId {
        let (q, _) = p.reduce_mod_lattice();
        let on_circle: Vec<bool> = self
            .circles
            .iter()
            .map(|c| {
                let v = c.normal.dot_rat(&q) - &c.offset;
                (v.clone() - rat(rat_floor(&v))).is_zero()
            })
            .collect();
        let n_on = on_circle.iter().filter(|b| **b).count();
        if n_on >= 2 {
            for i in self.cells_of_dim(0) {
                if self.cells[i].sample == q {
                    return i;
                }
            }
            panic!("vertex point not found in complex");
        }
        if n_on == 1 {
            let ci = on_circle.iter().position(|b| *b).unwrap();
            for i in self.cells_of_dim(1) {
                if self.cells[i].circle == ci && self.point_on_arc(i, &q) {
                    return i;
                }
            }
            // A point on a circle that is also a vertex of sorts; fall
            // through to the vertex scan for safety.
            for i in self.cells_of_dim(0) {
                if self.cells[i].sample == q {
                    return i;
                }
            }
            panic!("on-circle point not found in complex");
        }
        for i in self.cells_of_dim(2) {
            if self.point_in_open_cell(i, &q) {
                return i;
            }
        }
        panic!("point not located in any cell");
    }

    fn point_on_arc(&self, arc: CellId, q: &RatPoint) -> bool {
        let cell = &self.cells[arc];
        let (a, b) = (&cell.lift[0], &cell.lift[1]);
        let d = b.sub(a);
        for k in lattice_box(-3, 3, self.rank) {
            let qq = q.add_lattice(&k);
            let rel = qq.sub(a);
            let t = if !d.coord(0).is_zero() {
                rel.coord(0) / d.coord(0)
            } else {
                rel.coord(1) / d.coord(1)
            };
            if t > Rat::zero() && t < rat(1) && rel == d.scale(&t) {
                return true;
            }
        }
        false
    }

    fn point_in_open_cell(&self, face: CellId, q: &RatPoint) -> bool {
        let cell = &self.cells[face];
        for k in lattice_box(-3, 3, self.rank) {
            let qq = q.add_lattice(&k);
            if point_in_open_polygon(&qq, &cell.lift) {
                return true;
            }
        }
        false
    }
}

fn lattice_box(lo: i128, hi: i128, rank: usize) -> Vec<LatticeVector> {
    let mut out = Vec::new();
    match rank {
        1 => {
            for a in lo..=hi {
                out.push(LatticeVector::new(vec![a]));
            }
        }
        2 => {
            for a in lo..=hi {
                for b in lo..=hi {
                    out.push(LatticeVector::new(vec![a, b]));
                }
            }
        }
        _ => panic!("rank <= 2"),
    }
    out
}

fn point_in_open_polygon(p: &RatPoint, cycle: &[RatPoint]) -> bool {
    let n = cycle.len();
    for i in 0..n {
        let a = &cycle[i];
        let b = &cycle[(i + 1) % n];
        let cross = (b.coord(0) - a.coord(0)) * (p.coord(1) - a.coord(1))
            - (b.coord(1) - a.coord(1)) * (p.coord(0) - a.coord(0));
        if cross <= Rat::zero() {
            return false;
        }
    }
    true
}

fn point_in_closed_polygon(p: &RatPoint, cycle: &[RatPoint]) -> bool {
    let n = cycle.len();
    for i in 0..n {
        let a = &cycle[i];
        let b = &cycle[(i + 1) % n];
        let cross = (b.coord(0) - a.coord(0)) * (p.coord(1) - a.coord(1))
            - (b.coord(1) - a.coord(1)) * (p.coord(0) - a.coord(0));
        if cross < Rat::zero() {
            return false;
        }
    }
    true
}

/// Circles induced by a fan's rays (opposite rays share a circle), plus
/// synthetic coordinate circles when the normals fail to span, so that
/// every 2-cell is a disc.
pub fn circles_for_fan(fan: &Fan) -> Vec<Circle> {
    let mut circles: Vec<Circle> = Vec::new();
    for r in fan.rays() {
        let key = if fan.rank() == 1 {
            LatticeVector::new(vec![1])
        } else {
            Line::new(r.clone(), Rat::zero()).normal
        };
        match circles.iter_mut().find(|c| c.normal == key) {
            Some(c) => {
                if !c.carrying_rays.contains(r) {
                    c.carrying_rays.push(r.clone());
                }
            }
            None => circles.push(Circle {
                normal: key,
                offset: Rat::zero(),
                carrying_rays: vec![r.clone()],
            }),
        }
    }
    for c in &mut circles {
        c.carrying_rays.sort();
    }
    let rank = fan.rank();
    let axes: Vec<LatticeVector> = match rank {
        1 => vec![LatticeVector::new(vec![1])],
        2 => vec![
            LatticeVector::new(vec![1, 0]),
            LatticeVector::new(vec![0, 1]),
        ],
        _ => panic!("rank <= 2"),
    };
    let spans = |cs: &[Circle]| -> bool {
        match rank {
            1 => !cs.is_empty(),
            _ => {
                cs.iter().any(|a| {
                    cs.iter()
                        .any(|b| a.normal.cross2(&b.normal) != 0)
                })
            }
        }
    };
    for a in axes {
        if spans(&circles) {
            break;
        }
        if !circles.iter().any(|c| c.normal == a) {
            circles.push(Circle {
                normal: a,
                offset: Rat::zero(),
                carrying_rays: vec![],
            });
        }
    }
    circles.sort();
    circles
}

/// Build the cell decomposition of T^n induced by the given circles.
pub fn build_complex(rank: usize, circles: Vec<Circle>) -> Result<StrataComplex, CccError> {
    match rank {
        1 => build_torus_rank1(circles),
        2 => build_torus_rank2(circles),
        r => Err(CccError::UnsupportedRank { got: r, max: 2 }),
    }
}

/// The arrangement induced by a fan's skeleton circles.
pub fn build_arrangement(fan: &Fan) -> Result<StrataComplex, CccError> {
    build_complex(fan.rank(), circles_for_fan(fan))
}

fn fract(q: &Rat) -> Rat {
    q - rat(rat_floor(q))
}

fn build_torus_rank1(circles: Vec<Circle>) -> Result<StrataComplex, CccError> {
    let mut offsets: Vec<Rat> = circles.iter().map(|c| fract(&c.offset)).collect();
    offsets.sort();
    offsets.dedup();
    if offsets.is_empty() {
        offsets.push(Rat::zero());
    }
    let mut cells = Vec::new();
    let mut shifts: BTreeMap<(CellId, CellId), Vec<LatticeVector>> = BTreeMap::new();
    for o in &offsets {
        cells.push(TorusCell {
            dim: 0,
            sample: RatPoint::new(vec![o.clone()]),
            circle: usize::MAX,
            lift: vec![RatPoint::new(vec![o.clone()])],
        });
    }
    let nv = offsets.len();
    for i in 0..nv {
        let a = offsets[i].clone();
        let b = if i + 1 < nv {
            offsets[i + 1].clone()
        } else {
            &offsets[0] + rat(1)
        };
        let mid = (&a + &b) / rat(2);
        cells.push(TorusCell {
            dim: 1,
            sample: RatPoint::new(vec![fract(&mid)]),
            circle: usize::MAX,
            lift: vec![RatPoint::new(vec![a]), RatPoint::new(vec![b.clone()])],
        });
        let arc_id = nv + i;
        // lift(vertex) in closure(lift(arc) + k): k = vertex - endpoint.
        add_shift(&mut shifts, (i, arc_id), LatticeVector::new(vec![0]));
        let head = (i + 1) % nv;
        let k = &offsets[head] - &b;
        assert!(k.is_integer());
        add_shift(
            &mut shifts,
            (head, arc_id),
            LatticeVector::new(vec![k.to_integer()]),
        );
    }
    Ok(StrataComplex {
        rank: 1,
        circles,
        cells,
        shifts,
        wall_data: BTreeMap::new(),
    })
}

fn add_shift(
    shifts: &mut BTreeMap<(CellId, CellId), Vec<LatticeVector>>,
    key: (CellId, CellId),
    k: LatticeVector,
) {
    let e = shifts.entry(key).or_default();
    if !e.contains(&k) {
        e.push(k);
        e.sort();
    }
}

fn build_torus_rank2(circles: Vec<Circle>) -> Result<StrataComplex, CccError> {
    if !circles
        .iter()
        .any(|a| circles.iter().any(|b| a.normal.cross2(&b.normal) != 0))
    {
        return Err(CccError::Argument(
            "torus arrangement needs circles spanning both directions".into(),
        ));
    }

    // 0-cells: pairwise circle intersections, reduced mod the lattice.
    let mut vset: BTreeSet<RatPoint> = BTreeSet::new();
    for (i, a) in circles.iter().enumerate() {
        for b in circles.iter().skip(i + 1) {
            let d = a.normal.cross2(&b.normal);
            if d == 0 {
                continue;
            }
            let dd = d.abs();
            for s in 0..dd {
                for t in 0..dd {
                    let la = Line::new(a.normal.clone(), &a.offset + rat(s));
                    let lb = Line::new(b.normal.clone(), &b.offset + rat(t));
                    if let Some(p) = line_intersection(&la, &lb) {
                        vset.insert(p.reduce_mod_lattice().0);
                    }
                }
            }
        }
    }
    assert!(!vset.is_empty(), "spanning circles always intersect");
    let vertices: Vec<RatPoint> = vset.into_iter().collect();

    let mut cells: Vec<TorusCell> = vertices
        .iter()
        .map(|v| TorusCell {
            dim: 0,
            sample: v.clone(),
            circle: usize::MAX,
            lift: vec![v.clone()],
        })
        .collect();

    let mut shifts: BTreeMap<(CellId, CellId), Vec<LatticeVector>> = BTreeMap::new();
    let mut wall_data: BTreeMap<CellId, WallData> = BTreeMap::new();

    // 1-cells per circle: split the circle at its vertex parameters.
    struct ArcRec {
        id: usize,
        circle: usize,
    }
    let mut arcs: Vec<ArcRec> = Vec::new();
    for (ci, c) in circles.iter().enumerate() {
        let line0 = Line::new(c.normal.clone(), c.offset.clone());
        let d = line0.direction();
        let base = base_point_on(&line0);
        let phi = dual_functional(&d);
        let base_phi = phi.dot_rat(&base);
        let mut params: Vec<(Rat, usize)> = Vec::new();
        for (vi, v) in vertices.iter().enumerate() {
            let val = c.normal.dot_rat(v) - &c.offset;
            if fract(&val).is_zero() {
                let k = lift_to_line(v, c);
                let vv = v.add_lattice(&k);
                debug_assert!((c.normal.dot_rat(&vv) - &c.offset).is_zero());
                let t = fract(&(phi.dot_rat(&vv) - &base_phi));
                params.push((t, vi));
            }
        }
        params.sort();
        params.dedup();
        assert!(!params.is_empty(), "every circle meets another circle");
        let n = params.len();
        for i in 0..n {
            let (t0, v0) = params[i].clone();
            let (t1, v1) = if i + 1 < n {
                params[i + 1].clone()
            } else {
                (&params[0].0 + rat(1), params[0].1)
            };
            let p0 = point_at(&base, &d, &t0);
            let p1 = point_at(&base, &d, &t1);
            let mid = p0.midpoint(&p1);
            let (mid_red, mshift) = mid.reduce_mod_lattice();
            let a = p0.sub(&mshift.as_rat_point());
            let b = p1.sub(&mshift.as_rat_point());
            cells.push(TorusCell {
                dim: 1,
                sample: mid_red,
                circle: ci,
                lift: vec![a.clone(), b.clone()],
            });
            let id = cells.len() - 1;
            arcs.push(ArcRec { id, circle: ci });
            // Shift semantics: lift(vertex) in closure(lift(arc) + k), so
            // k = vertex - endpoint.
            for (vi, endpoint) in [(v0, &a), (v1, &b)] {
                let diff = vertices[vi].sub(endpoint);
                let k = diff
                    .as_lattice()
                    .expect("arc endpoints are lattice translates of vertices");
                add_shift(&mut shifts, (vi, id), k);
            }
        }
    }

    // 2-cells from arc side samples.
    let all_lines: Vec<Line> = circles
        .iter()
        .flat_map(|c| (-4i128..=5).map(move |k| Line::new(c.normal.clone(), &c.offset + rat(k))))
        .collect();
    let mut face_key_to_id: BTreeMap<Vec<RatPoint>, usize> = BTreeMap::new();
    let mut arc_sides: Vec<(usize, i8, usize)> = Vec::new();
    for arc in &arcs {
        let (l0, l1) = {
            let cell = &cells[arc.id];
            (cell.lift[0].clone(), cell.lift[1].clone())
        };
        let c = &circles[arc.circle];
        let mid = l0.midpoint(&l1);
        let delta = side_step(&all_lines, &mid, &c.normal);
        for side in [1i128, -1i128] {
            let q = mid.add(&c.normal.as_rat_point().scale(&(&delta * rat(side))));
            let poly = trace_band_polygon(&circles, &q);
            // Canonical form: translate so the centroid reduces into the
            // fundamental domain, then key on the sorted vertex list.
            let cen = centroid(&poly);
            let (_, cshift) = cen.reduce_mod_lattice();
            let canon: Vec<RatPoint> = poly
                .iter()
                .map(|p| p.sub(&cshift.as_rat_point()))
                .collect();
            let mut key = canon.clone();
            key.sort();
            let fid = *face_key_to_id.entry(key).or_insert_with(|| {
                let sample = centroid(&canon).reduce_mod_lattice().0;
                cells.push(TorusCell {
                    dim: 2,
                    sample,
                    circle: usize::MAX,
                    lift: canon.clone(),
                });
                cells.len() - 1
            });
            arc_sides.push((arc.id, side as i8, fid));
        }
    }
    for (arc_id, side, fid) in &arc_sides {
        let e = wall_data.entry(*arc_id).or_insert(WallData {
            positive_side: usize::MAX,
            negative_side: usize::MAX,
        });
        if *side > 0 {
            e.positive_side = *fid;
        } else {
            e.negative_side = *fid;
        }
    }

    // Shift decorations for (vertex or arc) <= face.
    let n_cells = cells.len();
    for lid in 0..n_cells {
        if cells[lid].dim == 2 {
            continue;
        }
        for fid in 0..n_cells {
            if cells[fid].dim != 2 {
                continue;
            }
            for k in lattice_box(-3, 3, 2) {
                let shifted: Vec<RatPoint> = cells[fid]
                    .lift
                    .iter()
                    .map(|p| p.add_lattice(&k))
                    .collect();
                let inside = match cells[lid].dim {
                    0 => point_in_closed_polygon(&cells[lid].lift[0], &shifted),
                    1 => {
                        point_in_closed_polygon(&cells[lid].lift[0], &shifted)
                            && point_in_closed_polygon(&cells[lid].lift[1], &shifted)
                    }
                    _ => unreachable!(),
                };
                if inside {
                    add_shift(&mut shifts, (lid, fid), k);
                }
            }
        }
    }

    Ok(StrataComplex {
        rank: 2,
        circles,
        cells,
        shifts,
        wall_data,
    })
}

/// Trace the closed polygon (ccw) of the open band-intersection cell
/// containing q in the periodic arrangement.
fn trace_band_polygon(circles: &[Circle], q: &RatPoint) -> Vec<RatPoint> {
    let mut walls: Vec<Line> = Vec::new();
    let mut bands: Vec<(LatticeVector, Rat, Rat)> = Vec::new();
    for c in circles {
        let v = c.normal.dot_rat(q) - &c.offset;
        let k = rat_floor(&v);
        debug_assert!(v != rat(k), "sample must be off every circle");
        let lo = &c.offset + rat(k);
        let hi = &c.offset + rat(k + 1);
        walls.push(Line::new(c.normal.clone(), lo.clone()));
        walls.push(Line::new(c.normal.clone(), hi.clone()));
        bands.push((c.normal.clone(), lo, hi));
    }
    let mut verts: BTreeSet<RatPoint> = BTreeSet::new();
    for (i, a) in walls.iter().enumerate() {
        for b in walls.iter().skip(i + 1) {
            if let Some(p) = line_intersection(a, b) {
                let ok = bands.iter().all(|(n, lo, hi)| {
                    let val = n.dot_rat(&p);
                    val >= *lo && val <= *hi
                });
                if ok {
                    verts.insert(p);
                }
            }
        }
    }
    let vs: Vec<RatPoint> = verts.into_iter().collect();
    assert!(vs.len() >= 3, "band cells of spanning circles are polygons");
    ccw_cycle(&vs)
}

fn centroid(pts: &[RatPoint]) -> RatPoint {
    let n = rat(pts.len() as i128);
    let mut x = Rat::zero();
    let mut y = Rat::zero();
    for p in pts {
        x += p.coord(0);
        y += p.coord(1);
    }
    RatPoint::new(vec![x / &n, y / &n])
}

fn ccw_cycle(pts: &[RatPoint]) -> Vec<RatPoint> {
    let c = centroid(pts);
    let mut out: Vec<RatPoint> = pts.to_vec();
    out.sort_by(|a, b| angular_cmp(&a.sub(&c), &b.sub(&c)));
    out
}

fn angular_cmp(a: &RatPoint, b: &RatPoint) -> core::cmp::Ordering {
    let half = |v: &RatPoint| -> u8 {
        let (x, y) = (v.coord(0), v.coord(1));
        if y > Rat::zero() || (y.is_zero() && x > Rat::zero()) {
            0
        } else {
            1
        }
    };
    let (ha, hb) = (half(a), half(b));
    if ha != hb {
        return ha.cmp(&hb);
    }
    let cross = a.coord(0) * b.coord(1) - a.coord(1) * b.coord(0);
    Rat::zero().cmp(&cross)
}

/// phi in N with <d, phi> = 1 for a primitive direction d.
fn dual_functional(d: &LatticeVector) -> LatticeVector {
    let basis = crate::lattice::extend_to_basis(&[d.clone()], 2).expect("primitive direction");
    let w = &basis[1];
    let det = d.cross2(w);
    LatticeVector::new(vec![w.coord(1) / det, -w.coord(0) / det])
}

/// A lattice translate k with <v + k, normal> = offset (+ some integer
/// absorbed), landing v exactly on the base line of the circle.
fn lift_to_line(v: &RatPoint, c: &Circle) -> LatticeVector {
    let need = &c.offset - c.normal.dot_rat(v);
    assert!(need.is_integer(), "point must lie on the circle");
    let n = need.to_integer();
    let u = dual_vector(&c.normal);
    u.scale(n)
}

/// u in M with <u, normal> = 1 for a primitive normal.
fn dual_vector(normal: &LatticeVector) -> LatticeVector {
    let basis = crate::lattice::extend_to_basis(&[normal.clone()], 2).expect("primitive normal");
    let w = &basis[1];
    crate::lattice::solve_integer_left(
        &[
            LatticeVector::new(vec![normal.coord(0), w.coord(0)]),
            LatticeVector::new(vec![normal.coord(1), w.coord(1)]),
        ],
        &LatticeVector::new(vec![1, 0]),
    )
    .expect("unimodular system")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::corpus;
    use crate::lattice::ratio;
    use crate::linalg::{Complex, SparseMat};

    fn lv(c: &[i128]) -> LatticeVector {
        LatticeVector::new(c.to_vec())
    }

    #[test]
    fn affine_arrangement_counts() {
        let lines = vec![
            Line::new(lv(&[1, 0]), Rat::zero()),
            Line::new(lv(&[0, 1]), Rat::zero()),
        ];
        let arr = AffineArrangement::build(2, &lines);
        let count = |d: usize| arr.cells.iter().filter(|c| c.dim == d).count();
        assert_eq!((count(0), count(1), count(2)), (1, 4, 4));

        let lines = vec![
            Line::new(lv(&[1, 0]), Rat::zero()),
            Line::new(lv(&[0, 1]), Rat::zero()),
            Line::new(lv(&[1, 1]), rat(1)),
        ];
        let arr = AffineArrangement::build(2, &lines);
        let count = |d: usize| arr.cells.iter().filter(|c| c.dim == d).count();
        assert_eq!((count(0), count(1), count(2)), (3, 9, 7));
    }

    #[test]
    fn affine_cochain_is_a_complex_computing_compact_support_cohomology() {
        let lines = vec![
            Line::new(lv(&[1, 0]), Rat::zero()),
            Line::new(lv(&[0, 1]), Rat::zero()),
            Line::new(lv(&[1, 1]), rat(1)),
            Line::new(lv(&[1, -1]), rat(-2)),
        ];
        let arr = AffineArrangement::build(2, &lines);
        let ids = |d: usize| -> Vec<usize> {
            (0..arr.cells.len())
                .filter(|i| arr.cells[*i].dim == d)
                .collect()
        };
        let (v, e, f) = (ids(0), ids(1), ids(2));
        let pos = |list: &[usize], id: usize| list.iter().position(|x| *x == id);
        let mut d0 = SparseMat::with_rows(v.len(), e.len());
        let mut d1 = SparseMat::with_rows(e.len(), f.len());
        for (lo, hi, s) in &arr.incidences {
            if let (Some(i), Some(j)) = (pos(&v, *lo), pos(&e, *hi)) {
                d0.add_entry(i, j, rat(*s as i128));
            }
            if let (Some(i), Some(j)) = (pos(&e, *lo), pos(&f, *hi)) {
                d1.add_entry(i, j, rat(*s as i128));
            }
        }
        let mut c = Complex::default();
        c.dims.insert(0, v.len());
        c.dims.insert(1, e.len());
        c.dims.insert(2, f.len());
        c.maps.insert(0, d0);
        c.maps.insert(1, d1);
        assert!(c.check_differential());
        // Compactly supported cohomology of the plane: Q in degree 2.
        let h = c.cohomology();
        assert_eq!(h.get(&2), Some(&1));
        assert_eq!(h.get(&0), None);
        assert_eq!(h.get(&1), None);
    }

    #[test]
    fn torus_complex_p2() {
        let sc = build_arrangement(&corpus::p2()).unwrap();
        assert_eq!(sc.cells_of_dim(0).count(), 1);
        assert_eq!(sc.cells_of_dim(1).count(), 3);
        assert_eq!(sc.cells_of_dim(2).count(), 2);
        assert_eq!(sc.euler(), 0);
    }

    #[test]
    fn torus_complex_counts() {
        let sc = build_arrangement(&corpus::a2()).unwrap();
        assert_eq!(sc.cells_of_dim(0).count(), 1);
        assert_eq!(sc.cells_of_dim(1).count(), 2);
        assert_eq!(sc.cells_of_dim(2).count(), 1);
        assert_eq!(sc.euler(), 0);

        let sc = build_arrangement(&corpus::hirzebruch(2)).unwrap();
        assert_eq!(sc.euler(), 0);
        assert_eq!(sc.cells_of_dim(0).count(), 2);

        let sc = build_arrangement(&corpus::p1()).unwrap();
        assert_eq!(sc.cells_of_dim(0).count(), 1);
        assert_eq!(sc.cells_of_dim(1).count(), 1);
        assert_eq!(sc.euler(), 0);

        for (_, fan) in corpus::complete_corpus() {
            let sc = build_arrangement(&fan).unwrap();
            assert_eq!(sc.euler(), 0, "chi(T^n) = 0");
        }
    }

    #[test]
    fn torus_shifts_are_present() {
        let sc = build_arrangement(&corpus::a2()).unwrap();
        let v = sc.cells_of_dim(0).next().unwrap();
        let f = sc.cells_of_dim(2).next().unwrap();
        assert_eq!(sc.shifts_between(v, f).len(), 4);
        for a in sc.cells_of_dim(1) {
            assert_eq!(sc.shifts_between(v, a).len(), 2);
            assert_eq!(sc.shifts_between(a, f).len(), 2);
        }
        // Wall data points at the unique 2-cell from both sides.
        for a in sc.cells_of_dim(1) {
            let wd = &sc.wall_data[&a];
            assert_eq!(wd.positive_side, f);
            assert_eq!(wd.negative_side, f);
        }
    }

    #[test]
    fn cell_lookup() {
        let sc = build_arrangement(&corpus::p2()).unwrap();
        let v = sc.cell_containing(&RatPoint::from_ints(&[0, 0]));
        assert_eq!(sc.cells[v].dim, 0);
        let generic = sc.cell_containing(&RatPoint::new(vec![ratio(1, 7), ratio(2, 5)]));
        assert_eq!(sc.cells[generic].dim, 2);
        let on_wall = sc.cell_containing(&RatPoint::new(vec![Rat::zero(), ratio(1, 3)]));
        assert_eq!(sc.cells[on_wall].dim, 1);
    }
}
