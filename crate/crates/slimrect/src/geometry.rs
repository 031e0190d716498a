//! Exact territory geometry: roofs, floors, illuminated sets, bodies,
//! circumscribed rectangles and original territories.
//!
//! Every region is described by rational half-plane data, so membership of a
//! point and containment of a positive-length edge segment are exact sign
//! tests. Segment tests parametrize the segment as `u + s·(v-u)` for
//! `s ∈ [0,1]` and clip the parameter interval.

use num::Zero;

use crate::diagram::{Coord, LatticeDiagram};
use crate::error::{Error, Result};
use crate::rat::Rat;

/// `(pmin, pmax, qmin, qmax)` of the drawing.
pub type Rect = (Rat, Rat, Rat, Rat);

/// A polyline through lattice points; roofs and floors are Λ-shaped with at
/// most three corners.
pub type Polyline = Vec<Coord>;

/// Rational parameter interval; empty when `lo >= hi` for positive-length
/// purposes.
#[derive(Clone, Debug)]
struct SInt {
    lo: Rat,
    hi: Rat,
}

impl SInt {
    fn unit() -> Self {
        SInt {
            lo: Rat::zero(),
            hi: Rat::from_integer(1.into()),
        }
    }

    fn positive(&self) -> bool {
        self.lo < self.hi
    }
}

/// Clips `r` to `{s : f0 + s·df <= c}` (or `>=` when `le` is false). With
/// `strict`, a segment running exactly on the threshold line is rejected.
fn clip(r: &mut SInt, f0: &Rat, df: &Rat, c: &Rat, le: bool, strict: bool) {
    if df.is_zero() {
        let ok = if le {
            if strict {
                f0 < c
            } else {
                f0 <= c
            }
        } else if strict {
            f0 > c
        } else {
            f0 >= c
        };
        if !ok {
            r.hi = r.lo.clone(); // empty
        }
        return;
    }
    let t = (c - f0) / df;
    let upper_bound = (df > &Rat::zero()) == le;
    if upper_bound {
        if t < r.hi {
            r.hi = t;
        }
    } else if t > r.lo {
        r.lo = t;
    }
}

fn cross_dir(d: (&Rat, &Rat), from: &Coord, z: &Coord) -> Rat {
    d.0 * (&z.q - &from.q) - d.1 * (&z.p - &from.p)
}

/// Illuminated set of the interval `[foot, peak]`:
/// `gideal(Roof) ∩ gfilter(Floor)` clipped to the full rectangle, i.e.
/// `{p <= p(peak), q <= q(peak)} ∩ {p >= p(foot) or q >= q(foot)}`.
pub fn pt_in_enl(foot: &Coord, peak: &Coord, rect: &Rect, z: &Coord, strict: bool) -> bool {
    let le = |a: &Rat, b: &Rat| if strict { a < b } else { a <= b };
    let ge = |a: &Rat, b: &Rat| if strict { a > b } else { a >= b };
    le(&z.p, &peak.p)
        && le(&z.q, &peak.q)
        && (ge(&z.p, &foot.p) || ge(&z.q, &foot.q))
        && ge(&z.p, &rect.0)
        && le(&z.p, &rect.1)
        && ge(&z.q, &rect.2)
        && le(&z.q, &rect.3)
}

/// Positive-length subsegment of `[u, v]` inside the (closed or open)
/// illuminated set of `[foot, peak]`.
pub fn seg_in_enl(foot: &Coord, peak: &Coord, u: &Coord, v: &Coord, strict: bool) -> bool {
    let dp = &v.p - &u.p;
    let dq = &v.q - &u.q;
    let mut r = SInt::unit();
    clip(&mut r, &u.p, &dp, &peak.p, true, strict);
    clip(&mut r, &u.q, &dq, &peak.q, true, strict);
    if !r.positive() {
        return false;
    }
    // Remove the pocket strictly below the floor: {p < p(foot) and q < q(foot)}
    // (its closure, when the region itself must be open).
    let mut pocket = r.clone();
    clip(&mut pocket, &u.p, &dp, &foot.p, true, !strict);
    clip(&mut pocket, &u.q, &dq, &foot.q, true, !strict);
    if !pocket.positive() {
        return true;
    }
    pocket.lo > r.lo || pocket.hi < r.hi
}

/// Side clips for left/right illuminated sets of a lamp. The barrier of
/// `LEnl` is the rightmost neon tube together with the horizontal level of
/// its foot; symmetrically for `REnl`.
#[derive(Clone, Debug)]
pub struct LampGeom {
    pub foot: Coord,
    pub peak: Coord,
    pub left_tube_foot: Coord,
    pub right_tube_foot: Coord,
}

impl LampGeom {
    fn lenl_ok(&self, z: &Coord, strict: bool) -> bool {
        let f = &self.right_tube_foot;
        let ge = |a: &Rat, b: &Rat| if strict { a > b } else { a >= b };
        let d = (&(&self.peak.p - &f.p), &(&self.peak.q - &f.q));
        let c = cross_dir((d.0, d.1), f, z);
        ge(&z.q, &f.q) && if strict { c > Rat::zero() } else { c >= Rat::zero() }
    }

    fn renl_ok(&self, z: &Coord, strict: bool) -> bool {
        let f = &self.left_tube_foot;
        let ge = |a: &Rat, b: &Rat| if strict { a > b } else { a >= b };
        let d = (&(&self.peak.p - &f.p), &(&self.peak.q - &f.q));
        let c = cross_dir((d.0, d.1), f, z);
        ge(&z.p, &f.p) && if strict { c < Rat::zero() } else { c <= Rat::zero() }
    }

    pub fn pt_in_lenl(&self, rect: &Rect, z: &Coord, strict: bool) -> bool {
        pt_in_enl(&self.foot, &self.peak, rect, z, strict) && self.lenl_ok(z, strict)
    }

    pub fn pt_in_renl(&self, rect: &Rect, z: &Coord, strict: bool) -> bool {
        pt_in_enl(&self.foot, &self.peak, rect, z, strict) && self.renl_ok(z, strict)
    }

    pub fn pt_in_body(&self, rect: &Rect, z: &Coord, strict: bool) -> bool {
        self.pt_in_lenl(rect, z, strict) && self.pt_in_renl(rect, z, strict)
    }

    fn seg_clip_side(&self, r: &mut SInt, u: &Coord, v: &Coord, left: bool, strict: bool) {
        let f = if left {
            &self.right_tube_foot
        } else {
            &self.left_tube_foot
        };
        let dp = &v.p - &u.p;
        let dq = &v.q - &u.q;
        // q >= q(f) for LEnl, p >= p(f) for REnl.
        if left {
            clip(r, &u.q, &dq, &f.q, false, strict);
        } else {
            clip(r, &u.p, &dp, &f.p, false, strict);
        }
        let d = (&self.peak.p - &f.p, &self.peak.q - &f.q);
        let f0 = &d.0 * (&u.q - &f.q) - &d.1 * (&u.p - &f.p);
        let df = &d.0 * &dq - &d.1 * &dp;
        clip(r, &f0, &df, &Rat::zero(), !left, strict);
    }

    pub fn seg_in_lenl(&self, u: &Coord, v: &Coord, strict: bool) -> bool {
        self.seg_in_enl_side(u, v, Some(true), strict)
    }

    pub fn seg_in_renl(&self, u: &Coord, v: &Coord, strict: bool) -> bool {
        self.seg_in_enl_side(u, v, Some(false), strict)
    }

    fn seg_in_enl_side(&self, u: &Coord, v: &Coord, left: Option<bool>, strict: bool) -> bool {
        let dp = &v.p - &u.p;
        let dq = &v.q - &u.q;
        let mut r = SInt::unit();
        clip(&mut r, &u.p, &dp, &self.peak.p, true, strict);
        clip(&mut r, &u.q, &dq, &self.peak.q, true, strict);
        match left {
            Some(true) => self.seg_clip_side(&mut r, u, v, true, strict),
            Some(false) => self.seg_clip_side(&mut r, u, v, false, strict),
            None => {}
        }
        if !r.positive() {
            return false;
        }
        let mut pocket = r.clone();
        clip(&mut pocket, &u.p, &dp, &self.foot.p, true, !strict);
        clip(&mut pocket, &u.q, &dq, &self.foot.q, true, !strict);
        if !pocket.positive() {
            return true;
        }
        pocket.lo > r.lo || pocket.hi < r.hi
    }
}

/// Point inside the closed axis box `[lo, hi]` in merge coordinates.
pub fn pt_in_box(lo: &Coord, hi: &Coord, z: &Coord, strict: bool) -> bool {
    let le = |a: &Rat, b: &Rat| if strict { a < b } else { a <= b };
    le(&lo.p, &z.p) && le(&z.p, &hi.p) && le(&lo.q, &z.q) && le(&z.q, &hi.q)
}

/// Positive-length subsegment of `[u, v]` inside the closed axis box.
pub fn seg_in_box(lo: &Coord, hi: &Coord, u: &Coord, v: &Coord) -> bool {
    let dp = &v.p - &u.p;
    let dq = &v.q - &u.q;
    let mut r = SInt::unit();
    clip(&mut r, &u.p, &dp, &hi.p, true, false);
    clip(&mut r, &u.q, &dq, &hi.q, true, false);
    clip(&mut r, &u.p, &dp, &lo.p, false, false);
    clip(&mut r, &u.q, &dq, &lo.q, false, false);
    r.positive()
}

/// Convex quadrilateral given counter-clockwise (in merge coordinates).
pub fn quad_contains(quad: &[Coord; 4], z: &Coord, strict: bool) -> bool {
    for i in 0..4 {
        let a = &quad[i];
        let b = &quad[(i + 1) % 4];
        let c = (&b.p - &a.p) * (&z.q - &a.q) - (&b.q - &a.q) * (&z.p - &a.p);
        let ok = if strict { c > Rat::zero() } else { c >= Rat::zero() };
        if !ok {
            return false;
        }
    }
    true
}

/// Positive-length subsegment of `[u, v]` inside the quad; with `strict`,
/// inside its interior (a segment running along a side does not count).
pub fn seg_in_quad(quad: &[Coord; 4], u: &Coord, v: &Coord, strict: bool) -> bool {
    let dp = &v.p - &u.p;
    let dq = &v.q - &u.q;
    let mut r = SInt::unit();
    for i in 0..4 {
        let a = &quad[i];
        let b = &quad[(i + 1) % 4];
        let ep = &b.p - &a.p;
        let eq = &b.q - &a.q;
        let f0 = &ep * (&u.q - &a.q) - &eq * (&u.p - &a.p);
        let df = &ep * &dq - &eq * &dp;
        clip(&mut r, &f0, &df, &Rat::zero(), false, strict);
        if !r.positive() {
            return false;
        }
    }
    true
}

/// A territory with exact membership predicates.
#[derive(Clone, Debug)]
pub enum Territory {
    /// The illuminated set of an interval; normally bordered.
    Illuminated { foot: Coord, peak: Coord, rect: Rect },
    LeftIlluminated { lamp: LampGeom, rect: Rect },
    RightIlluminated { lamp: LampGeom, rect: Rect },
    Body { lamp: LampGeom, rect: Rect },
    /// Union of closed axis boxes; normally bordered.
    Boxes(Vec<(Coord, Coord)>),
    /// Union of convex 4-cell regions (counter-clockwise corners).
    Quads(Vec<[Coord; 4]>),
}

impl Territory {
    pub fn contains_point(&self, z: &Coord, strict: bool) -> bool {
        match self {
            Territory::Illuminated { foot, peak, rect } => pt_in_enl(foot, peak, rect, z, strict),
            Territory::LeftIlluminated { lamp, rect } => lamp.pt_in_lenl(rect, z, strict),
            Territory::RightIlluminated { lamp, rect } => lamp.pt_in_renl(rect, z, strict),
            Territory::Body { lamp, rect } => lamp.pt_in_body(rect, z, strict),
            Territory::Boxes(boxes) => boxes.iter().any(|(lo, hi)| pt_in_box(lo, hi, z, strict)),
            Territory::Quads(quads) => quads.iter().any(|q| quad_contains(q, z, strict)),
        }
    }

    /// A closed subsegment of `[u, v]` of positive length lies in the closed
    /// territory. For unions this tests the pieces separately, which is exact
    /// for the piece shapes used here (pieces meet along shared borders).
    pub fn contains_segment(&self, u: &Coord, v: &Coord) -> bool {
        match self {
            Territory::Illuminated { foot, peak, .. } => seg_in_enl(foot, peak, u, v, false),
            Territory::LeftIlluminated { lamp, .. } => lamp.seg_in_lenl(u, v, false),
            Territory::RightIlluminated { lamp, .. } => lamp.seg_in_renl(u, v, false),
            Territory::Body { lamp, .. } => {
                lamp.seg_in_enl_side(u, v, Some(true), false)
                    && lamp.seg_in_enl_side(u, v, Some(false), false)
            }
            Territory::Boxes(boxes) => boxes.iter().any(|(lo, hi)| seg_in_box(lo, hi, u, v)),
            Territory::Quads(quads) => quads.iter().any(|q| seg_in_quad(q, u, v, false)),
        }
    }
}

/// Roof and floor polylines of the interval `[a, b]`: the Λ through the peak
/// and the Λ through the foot, with arms of normal slopes reaching the
/// boundary chains.
pub fn roof_floor(d: &LatticeDiagram, a: usize, b: usize) -> Result<(Polyline, Polyline)> {
    if !d.leq(a, b) {
        return Err(Error::NotComparable(
            d.label(a).to_string(),
            d.label(b).to_string(),
        ));
    }
    let (pmin, _, qmin, _) = d.full_rect();
    let lam = |apex: &Coord| -> Polyline {
        let mut pts = Vec::new();
        let left = Coord::new(pmin.clone(), apex.q.clone());
        if left != *apex {
            pts.push(left);
        }
        pts.push(apex.clone());
        let right = Coord::new(apex.p.clone(), qmin.clone());
        if right != *apex {
            pts.push(right);
        }
        pts
    };
    Ok((lam(d.coord(b)), lam(d.coord(a))))
}

/// Illuminated set (and one-sided variants for lamps) of an interval.
pub fn illuminated(d: &LatticeDiagram, a: usize, b: usize) -> Result<Territory> {
    if !d.leq(a, b) {
        return Err(Error::NotAnInterval);
    }
    Ok(Territory::Illuminated {
        foot: d.coord(a).clone(),
        peak: d.coord(b).clone(),
        rect: d.full_rect(),
    })
}

/// `(Enl, LEnl, REnl)` of a lamp.
pub fn illuminated_lamp(d: &LatticeDiagram, g: &LampGeom) -> (Territory, Territory, Territory) {
    let rect = d.full_rect();
    (
        Territory::Illuminated {
            foot: g.foot.clone(),
            peak: g.peak.clone(),
            rect: rect.clone(),
        },
        Territory::LeftIlluminated {
            lamp: g.clone(),
            rect: rect.clone(),
        },
        Territory::RightIlluminated {
            lamp: g.clone(),
            rect,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rint};

    fn c(p: i64, q: i64) -> Coord {
        Coord::new(rint(p), rint(q))
    }

    #[test]
    fn enl_of_bottom_cell_excludes_far_peak() {
        // Grid(2,2): interval [(0,0),(1,1)]; the far corner (2,2) is above the
        // roof, hence outside.
        let rect = (rint(0), rint(2), rint(0), rint(2));
        assert!(!pt_in_enl(&c(0, 0), &c(1, 1), &rect, &c(2, 2), false));
        assert!(pt_in_enl(&c(0, 0), &c(1, 1), &rect, &c(1, 1), false));
        assert!(pt_in_enl(&c(0, 0), &c(1, 1), &rect, &c(0, 0), false));
    }

    #[test]
    fn enl_whole_lattice_is_full_rect() {
        let rect = (rint(0), rint(1), rint(0), rint(1));
        for (p, q) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
            assert!(pt_in_enl(&c(0, 0), &c(1, 1), &rect, &c(p, q), false));
        }
    }

    #[test]
    fn segment_clipping_below_floor() {
        // Tube from (1/2,1/2) to (1,1) against the interval [(1/2,1/2),(1,1)]:
        // the whole tube lies in the illuminated set, but not strictly below
        // the floor pocket of a higher foot.
        let f = Coord::new(rat(1, 2), rat(1, 2));
        let t = c(1, 1);
        assert!(seg_in_enl(&f, &t, &f, &t, false));
        // The same tube is not inside Enl of the cell below it: it only
        // touches the roof corner.
        assert!(!seg_in_enl(&c(0, 0), &f, &f, &t, false));
    }

    #[test]
    fn quad_membership() {
        let quad = [c(0, 0), c(2, 0), c(2, 2), c(0, 2)];
        assert!(quad_contains(&quad, &c(1, 1), true));
        assert!(quad_contains(&quad, &c(0, 0), false));
        assert!(!quad_contains(&quad, &c(0, 0), true));
        assert!(seg_in_quad(&quad, &c(0, 0), &c(2, 2), true));
        // A segment along a side is in the closed quad but not its interior.
        assert!(seg_in_quad(&quad, &c(0, 0), &c(2, 0), false));
        assert!(!seg_in_quad(&quad, &c(0, 0), &c(2, 0), true));
    }

    #[test]
    fn box_segment() {
        assert!(seg_in_box(&c(0, 0), &c(1, 1), &c(0, 0), &c(2, 2)));
        assert!(!seg_in_box(&c(0, 0), &c(1, 1), &c(1, 1), &c(2, 2)));
    }
}
