//! Neon tubes, trajectories, lamps and the lamp poset.

use std::collections::{BTreeMap, BTreeSet};

use num::Zero;

use crate::diagram::{Coord, LatticeDiagram};
use crate::error::{Error, Result};
use crate::geometry::{self, LampGeom, Territory};
use crate::poset::Poset;
use crate::rat::Rat;
use crate::report::Report;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LampKind {
    LeftBoundary,
    RightBoundary,
    Internal,
}

#[derive(Clone, Debug)]
pub struct Lamp {
    pub peak: usize,
    /// Meet of the tube feet; determines the lamp uniquely.
    pub foot: usize,
    /// Neon tubes left to right.
    pub tubes: Vec<(usize, usize)>,
    pub kind: LampKind,
}

impl Lamp {
    pub fn is_internal(&self) -> bool {
        self.kind == LampKind::Internal
    }

    pub fn geom(&self, d: &LatticeDiagram) -> LampGeom {
        LampGeom {
            foot: d.coord(self.foot).clone(),
            peak: d.coord(self.peak).clone(),
            left_tube_foot: d.coord(self.tubes[0].0).clone(),
            right_tube_foot: d.coord(self.tubes.last().unwrap().0).clone(),
        }
    }

    /// Corners of the body region, counter-clockwise. Degenerates to the
    /// tube segment for one-tube lamps.
    pub fn body_corners(&self, d: &LatticeDiagram) -> Vec<Coord> {
        let foot = d.coord(self.foot).clone();
        let peak = d.coord(self.peak).clone();
        let lf = d.coord(self.tubes[0].0).clone();
        let rf = d.coord(self.tubes.last().unwrap().0).clone();
        if self.tubes.len() == 1 {
            vec![foot, peak]
        } else {
            vec![foot, rf, peak, lf]
        }
    }
}

/// All neon tubes: edges whose foot is meet-irreducible.
pub fn neon_tubes(d: &LatticeDiagram) -> Vec<(usize, usize)> {
    d.covers()
        .iter()
        .copied()
        .filter(|&(u, _)| u != d.top() && d.up_covers(u).len() == 1)
        .collect()
}

/// Boundary and internal lamps of an SR diagram.
pub fn lamps(d: &LatticeDiagram) -> Vec<Lamp> {
    let (_, _, _, qmax) = d.full_rect();
    let mut internal: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    let mut result = Vec::new();
    for (u, v) in neon_tubes(d) {
        if d.on_boundary(u) {
            let kind = if d.coord(u).q == qmax {
                LampKind::LeftBoundary
            } else {
                LampKind::RightBoundary
            };
            result.push(Lamp {
                peak: v,
                foot: u,
                tubes: vec![(u, v)],
                kind,
            });
        } else {
            internal.entry(v).or_default().push((u, v));
        }
    }
    for (peak, mut tubes) in internal {
        tubes.sort_by_key(|a| d.coord(a.0).x());
        let mut foot = tubes[0].0;
        for &(f, _) in &tubes[1..] {
            foot = d.meet(foot, f);
        }
        result.push(Lamp {
            peak,
            foot,
            tubes,
            kind: LampKind::Internal,
        });
    }
    result.sort_by_key(|l| l.foot);
    result
}

/// Index of the lamp owning a given neon tube.
pub fn tube_owner(lamps: &[Lamp], tube: (usize, usize)) -> Option<usize> {
    lamps.iter().position(|l| l.tubes.contains(&tube))
}

/// Finds a lamp by the label of its peak or foot. A peak shared between an
/// internal lamp and boundary lamps resolves to the internal one (internal
/// lamps are determined by their peaks); boundary lamps at a shared peak are
/// addressed by their feet.
pub fn find_lamp(d: &LatticeDiagram, lamps: &[Lamp], label: &str) -> Result<usize> {
    let v = d.idx(label)?;
    let by_peak: Vec<usize> = (0..lamps.len()).filter(|&i| lamps[i].peak == v).collect();
    if by_peak.len() == 1 {
        return Ok(by_peak[0]);
    }
    let internal: Vec<usize> = by_peak
        .iter()
        .copied()
        .filter(|&i| lamps[i].is_internal())
        .collect();
    if internal.len() == 1 {
        return Ok(internal[0]);
    }
    if let Some(i) = (0..lamps.len()).find(|&i| lamps[i].foot == v) {
        return Ok(i);
    }
    Err(Error::LampNotFound(label.to_string()))
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub edges: Vec<(usize, usize)>,
    pub top: (usize, usize),
}

fn down_perspective(d: &LatticeDiagram, p: (usize, usize), q: (usize, usize)) -> bool {
    d.meet(p.0, q.1) == q.0 && d.join(p.0, q.1) == p.1
}

/// Partition of the prime intervals into perspectivity classes, each with its
/// unique top edge (the class's neon tube).
pub fn trajectories(d: &LatticeDiagram) -> Vec<Trajectory> {
    let edges: Vec<(usize, usize)> = d.covers().to_vec();
    let m = edges.len();
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let r = find(parent, parent[i]);
            parent[i] = r;
        }
        parent[i]
    }
    for i in 0..m {
        for j in i + 1..m {
            if down_perspective(d, edges[i], edges[j]) || down_perspective(d, edges[j], edges[i]) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..m {
        let r = find(&mut parent, i);
        classes.entry(r).or_default().push(i);
    }
    let mut result = Vec::new();
    for (_, members) in classes {
        let tops: Vec<usize> = members
            .iter()
            .copied()
            .filter(|&i| {
                !members
                    .iter()
                    .any(|&j| j != i && down_perspective(d, edges[j], edges[i]))
            })
            .collect();
        debug_assert_eq!(tops.len(), 1, "trajectory must have a unique top edge");
        result.push(Trajectory {
            edges: members.iter().map(|&i| edges[i]).collect(),
            top: edges[tops[0]],
        });
    }
    result
}

pub fn trajectory_of(trajs: &[Trajectory], e: (usize, usize)) -> Option<&Trajectory> {
    trajs.iter().find(|t| t.edges.contains(&e))
}

/// 4-cells traversed by a trajectory: cells two of whose opposite sides are
/// consecutive trajectory edges.
pub fn trajectory_cells(
    _d: &LatticeDiagram,
    cells: &[crate::structure::FourCell],
    traj: &Trajectory,
) -> Vec<usize> {
    let has = |e: (usize, usize)| traj.edges.contains(&e);
    (0..cells.len())
        .filter(|&i| {
            let c = &cells[i];
            has((c.bottom, c.left)) || has((c.bottom, c.right))
        })
        .collect()
}

/// The four lamp relations of Definition "ρ". All are relations on internal
/// first components; `equal` reports whether the four coincide.
pub struct LampRelations {
    pub rho_foot: BTreeSet<(usize, usize)>,
    pub rho_infoot: BTreeSet<(usize, usize)>,
    pub rho_lrbody: BTreeSet<(usize, usize)>,
    pub rho_body: BTreeSet<(usize, usize)>,
    pub equal: bool,
}

fn shoelace_twice(poly: &[Coord]) -> Rat {
    let mut s = Rat::zero();
    for i in 0..poly.len() {
        let a = &poly[i];
        let b = &poly[(i + 1) % poly.len()];
        s += &a.p * &b.q - &a.q * &b.p;
    }
    s
}

fn clip_convex(poly: &[Coord], inside: impl Fn(&Coord) -> bool, line_hit: impl Fn(&Coord, &Coord) -> Option<Coord>) -> Vec<Coord> {
    let mut out = Vec::new();
    let n = poly.len();
    for i in 0..n {
        let cur = &poly[i];
        let nxt = &poly[(i + 1) % n];
        let cin = inside(cur);
        let nin = inside(nxt);
        if cin {
            out.push(cur.clone());
        }
        if cin != nin {
            if let Some(x) = line_hit(cur, nxt) {
                out.push(x);
            }
        }
    }
    out.dedup();
    if out.len() > 1 && out.first() == out.last() {
        out.pop();
    }
    out
}

/// Does the convex polygon contain a point strictly dominated by `(pf, qf)`,
/// i.e. meet the open pocket `{p < pf, q < qf}`?
fn poly_meets_open_pocket(poly: &[Coord], pf: &Rat, qf: &Rat) -> bool {
    if poly.is_empty() {
        return false;
    }
    if poly.len() == 2 {
        return strict_pocket_segment(&poly[0], &poly[1], pf, qf);
    }
    let clipped = clip_convex(
        poly,
        |c| &c.p <= pf,
        |a, b| line_cross_p(a, b, pf),
    );
    let clipped = clip_convex(
        &clipped,
        |c| &c.q <= qf,
        |a, b| line_cross_q(a, b, qf),
    );
    if clipped.is_empty() {
        return false;
    }
    if clipped.iter().any(|c| &c.p < pf && &c.q < qf) {
        return true;
    }
    clipped.len() >= 3 && !shoelace_twice(&clipped).is_zero()
}

fn strict_pocket_segment(u: &Coord, v: &Coord, pf: &Rat, qf: &Rat) -> bool {
    // positive-length subsegment with p < pf and q < qf
    let dp = &v.p - &u.p;
    let dq = &v.q - &u.q;
    let mut lo = Rat::zero();
    let mut hi = Rat::from_integer(1.into());
    for (f0, df, c) in [(&u.p, &dp, pf), (&u.q, &dq, qf)] {
        if df.is_zero() {
            if !(f0 < c) {
                return false;
            }
        } else {
            let t = (c - f0) / df;
            if df > &Rat::zero() {
                if t < hi {
                    hi = t;
                }
            } else if t > lo {
                lo = t;
            }
        }
    }
    lo < hi
}

fn line_cross_p(a: &Coord, b: &Coord, pf: &Rat) -> Option<Coord> {
    let dp = &b.p - &a.p;
    if dp.is_zero() {
        return None;
    }
    let t = (pf - &a.p) / &dp;
    Some(Coord::new(pf.clone(), &a.q + t * (&b.q - &a.q)))
}

fn line_cross_q(a: &Coord, b: &Coord, qf: &Rat) -> Option<Coord> {
    let dq = &b.q - &a.q;
    if dq.is_zero() {
        return None;
    }
    let t = (qf - &a.q) / &dq;
    Some(Coord::new(&a.p + t * (&b.p - &a.p), qf.clone()))
}

/// Exact containment of the body region of lamp `i` in a one-sided or full
/// illuminated set of lamp `j`: convex constraints are checked on the body's
/// corners, the floor pocket by convex clipping.
fn body_in(body: &[Coord], j_geom: &LampGeom, side: Option<bool>) -> bool {
    // The convex constraints are exact on the body's corners; the concave
    // part (the open pocket below J's floor) is tested by convex clipping.
    let convex_ok = body.iter().all(|c| {
        let ideal = c.p <= j_geom.peak.p && c.q <= j_geom.peak.q;
        let side_ok = match side {
            Some(true) => {
                let f = &j_geom.right_tube_foot;
                c.q >= f.q && cross_of(&j_geom.peak, f, c) >= Rat::zero()
            }
            Some(false) => {
                let f = &j_geom.left_tube_foot;
                c.p >= f.p && cross_of(&j_geom.peak, f, c) <= Rat::zero()
            }
            None => true,
        };
        ideal && side_ok
    });
    convex_ok && !poly_meets_open_pocket(body, &j_geom.foot.p, &j_geom.foot.q)
}

fn cross_of(peak: &Coord, f: &Coord, z: &Coord) -> Rat {
    (&peak.p - &f.p) * (&z.q - &f.q) - (&peak.q - &f.q) * (&z.p - &f.p)
}

pub fn lamp_relations(d: &LatticeDiagram, lamps: &[Lamp]) -> LampRelations {
    let rect = d.full_rect();
    let mut rho_foot = BTreeSet::new();
    let mut rho_infoot = BTreeSet::new();
    let mut rho_lrbody = BTreeSet::new();
    let mut rho_body = BTreeSet::new();
    for (i, li) in lamps.iter().enumerate() {
        if !li.is_internal() {
            continue;
        }
        let foot = d.coord(li.foot);
        let body = li.body_corners(d);
        for (j, lj) in lamps.iter().enumerate() {
            if i == j {
                continue;
            }
            let g = lj.geom(d);
            // A foot on the roof of J (piled forks put feet exactly on roof
            // lines) is not in J's light: the region below the roof is open
            // on the roof side and closed on the floor side.
            let under_open_roof = foot.p < g.peak.p && foot.q < g.peak.q;
            let above_closed_floor = foot.p >= g.foot.p || foot.q >= g.foot.q;
            if under_open_roof && above_closed_floor {
                rho_foot.insert((i, j));
            }
            if geometry::pt_in_enl(&g.foot, &g.peak, &rect, foot, true) {
                rho_infoot.insert((i, j));
            }
            if body_in(&body, &g, Some(true)) || body_in(&body, &g, Some(false)) {
                rho_lrbody.insert((i, j));
            }
            if body_in(&body, &g, None) {
                rho_body.insert((i, j));
            }
        }
    }
    let equal = rho_foot == rho_infoot && rho_foot == rho_lrbody && rho_foot == rho_body;
    LampRelations {
        rho_foot,
        rho_infoot,
        rho_lrbody,
        rho_body,
        equal,
    }
}

/// Lamp poset: reflexive-transitive closure of `ρ_infoot`, with elements
/// labelled by the lamp feet.
pub fn lamp_poset(d: &LatticeDiagram, lamps: &[Lamp]) -> Poset {
    let rel = lamp_relations(d, lamps);
    let labels: Vec<String> = lamps.iter().map(|l| d.label(l.foot).to_string()).collect();
    let pairs: Vec<(usize, usize)> = rel.rho_infoot.iter().copied().collect();
    Poset::new(labels, &pairs).expect("lamp relation closure is a poset")
}

/// Upper-left and upper-right edges of the circumscribed rectangle of an
/// internal lamp: the edges from the outermost lower covers of the peak.
pub fn hh_edges(d: &LatticeDiagram, lamp: &Lamp) -> Result<((usize, usize), (usize, usize))> {
    if !lamp.is_internal() {
        return Err(Error::BoundaryLamp(d.label(lamp.foot).to_string()));
    }
    let downs = d.down_covers(lamp.peak);
    let lc = *downs.first().unwrap();
    let rc = *downs.last().unwrap();
    Ok(((lc, lamp.peak), (rc, lamp.peak)))
}

/// Northwest/northeast lamps: owners of the trajectory tops through
/// `hhl`/`hhr`. For boundary lamps the corresponding side is the lamp itself.
pub fn nwl_nel(
    d: &LatticeDiagram,
    lamps: &[Lamp],
    trajs: &[Trajectory],
    i: usize,
) -> Result<(usize, usize)> {
    let (hhl, hhr) = hh_edges(d, &lamps[i])?;
    let top_l = trajectory_of(trajs, hhl)
        .expect("every edge is in a trajectory")
        .top;
    let top_r = trajectory_of(trajs, hhr)
        .expect("every edge is in a trajectory")
        .top;
    let nwl = tube_owner(lamps, top_l).expect("trajectory top is a neon tube");
    let nel = tube_owner(lamps, top_r).expect("trajectory top is a neon tube");
    Ok((nwl, nel))
}

/// Covers of an internal lamp in the lamp poset, computed as
/// `Min{NWL(I), NEL(I)}`.
pub fn lamp_covers(
    d: &LatticeDiagram,
    lamps: &[Lamp],
    trajs: &[Trajectory],
    poset: &Poset,
    i: usize,
) -> Result<Vec<usize>> {
    let (nwl, nel) = nwl_nel(d, lamps, trajs, i)?;
    let mut set = vec![nwl];
    if nel != nwl {
        set.push(nel);
    }
    let min: Vec<usize> = set
        .iter()
        .copied()
        .filter(|&a| !set.iter().any(|&b| b != a && poset.lt(b, a)))
        .collect();
    Ok(min)
}

/// Rungs of a lamp: for roof vertices `x` off the floor, the interval
/// `[x ∧ Foot I, x]`. Left rungs run at constant `p`, right rungs at
/// constant `q`.
pub fn rungs(d: &LatticeDiagram, lamp: &Lamp) -> Vec<(usize, usize)> {
    let peak = d.coord(lamp.peak);
    let foot = d.coord(lamp.foot);
    let mut result = Vec::new();
    for x in 0..d.n() {
        if x == lamp.peak {
            continue;
        }
        let cx = d.coord(x);
        let on_lroof = cx.q == peak.q && cx.p <= peak.p;
        let on_lfloor = cx.q == foot.q && cx.p <= foot.p;
        let on_rroof = cx.p == peak.p && cx.q <= peak.q;
        let on_rfloor = cx.p == foot.p && cx.q <= foot.q;
        if (on_lroof && !on_lfloor) || (on_rroof && !on_rfloor) {
            let lo = d.meet(x, lamp.foot);
            result.push((lo, x));
        }
    }
    result.sort();
    result
}

/// Validates Lemma-level rung structure: non-singleton chains of constant
/// `p` (left) or constant `q` (right), and sides empty exactly for boundary
/// lamps of that side.
pub fn validate_rungs(d: &LatticeDiagram, lamp: &Lamp, report: &mut Report) {
    let peak = d.coord(lamp.peak);
    let rs = rungs(d, lamp);
    let mut left = 0usize;
    let mut right = 0usize;
    for &(lo, hi) in &rs {
        let clo = d.coord(lo);
        let chi = d.coord(hi);
        if lo == hi {
            report.record("rung-non-singleton", false, Some(d.label(hi).to_string()));
            return;
        }
        let constant_p = clo.p == chi.p;
        let constant_q = clo.q == chi.q;
        if chi.q == peak.q && constant_p {
            left += 1;
        } else if chi.p == peak.p && constant_q {
            right += 1;
        } else {
            report.record("rung-normal-slope", false, Some(d.label(hi).to_string()));
            return;
        }
        let iv = d.interval(lo, hi);
        let line_ok = iv.iter().all(|&z| {
            if constant_p {
                d.coord(z).p == clo.p
            } else {
                d.coord(z).q == clo.q
            }
        });
        let mut sorted = iv.clone();
        sorted.sort_by_key(|&a| d.coord(a).height());
        let linear = sorted.windows(2).all(|w| d.leq(w[0], w[1]));
        report.record(
            format!("rung-chain-{}", d.label(hi)),
            line_ok && linear,
            None,
        );
    }
    report.record(
        "left-rungs-iff-not-left-boundary",
        (left > 0) == (lamp.kind != LampKind::LeftBoundary),
        None,
    );
    report.record(
        "right-rungs-iff-not-right-boundary",
        (right > 0) == (lamp.kind != LampKind::RightBoundary),
        None,
    );
}

/// Lamp region data: body, circumscribed rectangle, its upper half and pegs.
pub struct LampRegions {
    pub body: Territory,
    /// `(base, peak)` of the circumscribed rectangle.
    pub circ_r: (usize, usize),
    /// The 4-cells under the peak, as convex quads.
    pub uh_circ_r: Territory,
    pub pegs: Vec<usize>,
}

pub fn lamp_regions(d: &LatticeDiagram, lamp: &Lamp) -> Result<LampRegions> {
    if !lamp.is_internal() {
        return Err(Error::BoundaryLamp(d.label(lamp.foot).to_string()));
    }
    let downs = d.down_covers(lamp.peak);
    let lc = *downs.first().unwrap();
    let rc = *downs.last().unwrap();
    let base = d.meet(lc, rc);
    // Corners of CircR must be the outer lower covers, at box corners.
    let cb = d.coord(base);
    let cp = d.coord(lamp.peak);
    if !(d.coord(lc).p == cb.p && d.coord(lc).q == cp.q)
        || !(d.coord(rc).p == cp.p && d.coord(rc).q == cb.q)
    {
        return Err(Error::NotSr(format!(
            "circumscribed rectangle of {} is not normally bordered",
            d.label(lamp.foot)
        )));
    }
    let mut pegs = vec![lc, rc];
    pegs.extend(lamp.tubes.iter().map(|&(f, _)| f));
    pegs.sort();
    pegs.dedup();
    let mut quads = Vec::new();
    for w in downs.windows(2) {
        let (a, b) = (w[0], w[1]);
        let bottom = d.meet(a, b);
        quads.push([
            d.coord(bottom).clone(),
            d.coord(b).clone(),
            cp.clone(),
            d.coord(a).clone(),
        ]);
    }
    Ok(LampRegions {
        body: Territory::Body {
            lamp: lamp.geom(d),
            rect: d.full_rect(),
        },
        circ_r: (base, lamp.peak),
        uh_circ_r: Territory::Quads(quads),
        pegs,
    })
}

/// The 6.u-style validation: pegs pairwise on slight-slope lines, and the
/// interior of the upper half of the circumscribed rectangle free of
/// vertices and of edge segments.
pub fn validate_lamp_regions(d: &LatticeDiagram, lamp: &Lamp, report: &mut Report) {
    let regions = match lamp_regions(d, lamp) {
        Ok(r) => r,
        Err(e) => {
            report.record("circ-r", false, Some(e.to_string()));
            return;
        }
    };
    report.record(
        "pegs-count",
        regions.pegs.len() == lamp.tubes.len() + 2,
        Some(format!(
            "{} pegs for {} tubes",
            regions.pegs.len(),
            lamp.tubes.len()
        )),
    );
    let mut slight = true;
    for (i, &a) in regions.pegs.iter().enumerate() {
        for &b in &regions.pegs[i + 1..] {
            let dp = &d.coord(b).p - &d.coord(a).p;
            let dq = &d.coord(b).q - &d.coord(a).q;
            if (dp * dq) >= Rat::zero() {
                slight = false;
            }
        }
    }
    report.record("pegs-pairwise-slight-slope", slight, None);

    if let Territory::Quads(quads) = &regions.uh_circ_r {
        let mut clean = true;
        let mut witness = None;
        for quad in quads {
            for (v, label, c) in d.vertices() {
                let _ = v;
                if geometry::quad_contains(quad, c, true) {
                    clean = false;
                    witness = Some(format!("vertex {label} inside UHCircR"));
                }
            }
            for &(u, v) in d.covers() {
                if geometry::seg_in_quad(quad, d.coord(u), d.coord(v), true) {
                    clean = false;
                    witness = Some(format!(
                        "edge [{}, {}] inside UHCircR",
                        d.label(u),
                        d.label(v)
                    ));
                }
            }
        }
        report.record("uhcircr-interior-free", clean, witness);
    }
}
