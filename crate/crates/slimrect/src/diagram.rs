//! Finite planar lattice diagrams with exact merge coordinates.
//!
//! A vertex sits at `(p, q)` where `p = (x+y)/2` and `q = (y-x)/2` for the
//! plane point `(x, y)`. Under this change of coordinates the two normal
//! slopes become the coordinate axes: an upward edge has slope `(1,1)` iff
//! `Δq = 0`, slope `(-1,1)` iff `Δp = 0`, and is precipitous iff both deltas
//! are positive. Slight slopes (`Δp·Δq < 0`) are rejected at build time.

use std::collections::BTreeMap;

use num::Zero;

use crate::error::{Error, Result};
use crate::rat::Rat;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coord {
    pub p: Rat,
    pub q: Rat,
}

impl Coord {
    pub fn new(p: Rat, q: Rat) -> Self {
        Coord { p, q }
    }

    /// Height in the drawing, `y = p + q`. Strictly increases along covers.
    pub fn height(&self) -> Rat {
        &self.p + &self.q
    }

    /// Horizontal position in the drawing, `x = p - q`.
    pub fn x(&self) -> Rat {
        &self.p - &self.q
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlopeClass {
    /// Slope `(1,1)`: `Δq = 0`, `Δp > 0`.
    NormalNe,
    /// Slope `(-1,1)`: `Δp = 0`, `Δq > 0`.
    NormalNw,
    /// Both deltas positive.
    Precipitous,
}

impl SlopeClass {
    pub fn is_normal(self) -> bool {
        !matches!(self, SlopeClass::Precipitous)
    }
}

/// Fixed-width bit rows used for the order relation and bound computations.
#[derive(Clone, Debug, Default)]
pub struct Bits {
    words: Vec<u64>,
}

impl Bits {
    pub fn new(n: usize) -> Self {
        Bits {
            words: vec![0; n.div_ceil(64)],
        }
    }

    pub fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn or_assign(&mut self, other: &Bits) {
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w |= o;
        }
    }

    pub fn and(&self, other: &Bits) -> Bits {
        Bits {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    pub fn is_subset_of(&self, other: &Bits) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
}

pub struct Irreducibles {
    pub jir: Vec<usize>,
    pub mir: Vec<usize>,
    pub doubly: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct LatticeDiagram {
    labels: Vec<String>,
    coords: Vec<Coord>,
    index: BTreeMap<String, usize>,
    coord_index: BTreeMap<Coord, usize>,
    covers: Vec<(usize, usize)>,
    up: Vec<Vec<usize>>,
    down: Vec<Vec<usize>>,
    down_rows: Vec<Bits>,
    up_rows: Vec<Bits>,
    meet_t: Vec<u32>,
    join_t: Vec<u32>,
    bottom: usize,
    top: usize,
}

impl LatticeDiagram {
    /// Builds and fully validates a diagram: unique labels and coordinates,
    /// upward covers only, genuine covering pairs, a lattice order with a
    /// unique bottom and top, and a planar drawing (no edge through a vertex,
    /// no two edges meeting outside a shared endpoint).
    pub fn build(vertices: Vec<(String, Coord)>, covers: &[(String, String)]) -> Result<Self> {
        let n = vertices.len();
        if n == 0 {
            return Err(Error::NotALattice("empty vertex set".into()));
        }
        let mut index = BTreeMap::new();
        let mut coord_index = BTreeMap::new();
        let mut labels = Vec::with_capacity(n);
        let mut coords = Vec::with_capacity(n);
        for (i, (label, coord)) in vertices.into_iter().enumerate() {
            if index.insert(label.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(label));
            }
            if let Some(&j) = coord_index.get(&coord) {
                return Err(Error::NotPlanar(format!(
                    "vertices {} and {} share a coordinate",
                    labels[j], label
                )));
            }
            coord_index.insert(coord.clone(), i);
            labels.push(label);
            coords.push(coord);
        }

        let mut cover_idx: Vec<(usize, usize)> = Vec::with_capacity(covers.len());
        for (lo, hi) in covers {
            let &u = index
                .get(lo.as_str())
                .ok_or_else(|| Error::UnknownLabel(lo.clone()))?;
            let &v = index
                .get(hi.as_str())
                .ok_or_else(|| Error::UnknownLabel(hi.clone()))?;
            let dp = &coords[v].p - &coords[u].p;
            let dq = &coords[v].q - &coords[u].q;
            if dp < Rat::zero() || dq < Rat::zero() || (dp.is_zero() && dq.is_zero()) {
                return Err(Error::DownwardEdge(lo.clone(), hi.clone()));
            }
            cover_idx.push((u, v));
        }
        cover_idx.sort();
        cover_idx.dedup();

        let mut up = vec![Vec::new(); n];
        let mut down = vec![Vec::new(); n];
        for &(u, v) in &cover_idx {
            up[u].push(v);
            down[v].push(u);
        }
        // Neighbor lists ordered left to right in the drawing.
        for list in up.iter_mut().chain(down.iter_mut()) {
            list.sort_by(|&a, &b| coords[a].x().cmp(&coords[b].x()));
        }

        // Reflexive-transitive closure, processing vertices by height.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            coords[a]
                .height()
                .cmp(&coords[b].height())
                .then_with(|| coords[a].p.cmp(&coords[b].p))
        });
        let mut down_rows = vec![Bits::new(n); n];
        for &v in &order {
            let mut row = Bits::new(n);
            row.set(v);
            for &u in &down[v] {
                row.or_assign(&down_rows[u]);
            }
            down_rows[v] = row;
        }
        let mut up_rows = vec![Bits::new(n); n];
        for &v in order.iter().rev() {
            let mut row = Bits::new(n);
            row.set(v);
            for &w in &up[v] {
                row.or_assign(&up_rows[w]);
            }
            up_rows[v] = row;
        }

        // Covers must be genuine covering pairs of the generated order.
        for &(u, v) in &cover_idx {
            let between = down_rows[v].and(&up_rows[u]);
            if between.count() != 2 {
                return Err(Error::RedundantCover(labels[u].clone(), labels[v].clone()));
            }
        }

        let minimal: Vec<usize> = (0..n).filter(|&v| down[v].is_empty()).collect();
        let maximal: Vec<usize> = (0..n).filter(|&v| up[v].is_empty()).collect();
        if minimal.len() != 1 {
            return Err(Error::NotALattice(format!(
                "{} minimal elements",
                minimal.len()
            )));
        }
        if maximal.len() != 1 {
            return Err(Error::NotALattice(format!(
                "{} maximal elements",
                maximal.len()
            )));
        }
        let bottom = minimal[0];
        let top = maximal[0];

        let mut rank = vec![0usize; n];
        for (r, &v) in order.iter().enumerate() {
            rank[v] = r;
        }
        let mut meet_t = vec![0u32; n * n];
        let mut join_t = vec![0u32; n * n];
        for a in 0..n {
            for b in a..n {
                let m = Self::extremum(&down_rows, &rank, a, b, true).ok_or_else(|| {
                    Error::NotALattice(format!(
                        "{} and {} have no meet",
                        labels[a], labels[b]
                    ))
                })?;
                meet_t[a * n + b] = m as u32;
                meet_t[b * n + a] = m as u32;
                let j = Self::extremum(&up_rows, &rank, a, b, false).ok_or_else(|| {
                    Error::NotALattice(format!(
                        "{} and {} have no join",
                        labels[a], labels[b]
                    ))
                })?;
                join_t[a * n + b] = j as u32;
                join_t[b * n + a] = j as u32;
            }
        }

        let d = LatticeDiagram {
            labels,
            coords,
            index,
            coord_index,
            covers: cover_idx,
            up,
            down,
            down_rows,
            up_rows,
            meet_t,
            join_t,
            bottom,
            top,
        };
        d.check_planar()?;
        Ok(d)
    }

    /// Greatest element of `down[a] ∩ down[b]` (or dually least upper bound):
    /// the candidate of extreme height must dominate the whole bound set.
    /// Heights are compared through their precomputed topological ranks.
    fn extremum(rows: &[Bits], rank: &[usize], a: usize, b: usize, max: bool) -> Option<usize> {
        let common = rows[a].and(&rows[b]);
        let mut best: Option<usize> = None;
        for v in common.ones() {
            best = match best {
                None => Some(v),
                Some(m) => {
                    let better = if max { rank[v] > rank[m] } else { rank[v] < rank[m] };
                    Some(if better { v } else { m })
                }
            };
        }
        let m = best?;
        if common.is_subset_of(&rows[m]) {
            Some(m)
        } else {
            None
        }
    }

    fn check_planar(&self) -> Result<()> {
        // Classify once: most edges are axis-parallel in merge coordinates,
        // where vertex and crossing tests are plain comparisons.
        #[derive(Clone, Copy, PartialEq)]
        enum Kind {
            Ne,
            Nw,
            Prec,
        }
        let kinds: Vec<Kind> = self
            .covers
            .iter()
            .map(|&(u, v)| {
                let dp = self.coords[v].p != self.coords[u].p;
                let dq = self.coords[v].q != self.coords[u].q;
                match (dp, dq) {
                    (true, false) => Kind::Ne,
                    (false, true) => Kind::Nw,
                    _ => Kind::Prec,
                }
            })
            .collect();
        // No edge passes through a third vertex.
        for (ei, &(u, v)) in self.covers.iter().enumerate() {
            let (cu, cv) = (&self.coords[u], &self.coords[v]);
            for w in 0..self.n() {
                if w == u || w == v {
                    continue;
                }
                let cw = &self.coords[w];
                let hit = match kinds[ei] {
                    Kind::Ne => cw.q == cu.q && cu.p < cw.p && cw.p < cv.p,
                    Kind::Nw => cw.p == cu.p && cu.q < cw.q && cw.q < cv.q,
                    Kind::Prec => point_on_open_segment(cw, cu, cv),
                };
                if hit {
                    return Err(Error::NotPlanar(format!(
                        "edge [{}, {}] passes through {}",
                        self.labels[u], self.labels[v], self.labels[w]
                    )));
                }
            }
        }
        // No two edges intersect outside a shared endpoint. With the
        // through-vertex check done, axis-parallel pairs can only clash by
        // collinear overlap or an interior-interior crossing.
        for (i, &(a, b)) in self.covers.iter().enumerate() {
            let (ca, cb) = (&self.coords[a], &self.coords[b]);
            for (j, &(c, d)) in self.covers.iter().enumerate().skip(i + 1) {
                let (cc, cd) = (&self.coords[c], &self.coords[d]);
                let clash = match (kinds[i], kinds[j]) {
                    (Kind::Ne, Kind::Ne) => {
                        ca.q == cc.q && ca.p.clone().max(cc.p.clone()) < cb.p.clone().min(cd.p.clone())
                    }
                    (Kind::Nw, Kind::Nw) => {
                        ca.p == cc.p && ca.q.clone().max(cc.q.clone()) < cb.q.clone().min(cd.q.clone())
                    }
                    (Kind::Ne, Kind::Nw) => {
                        ca.p < cc.p && cc.p < cb.p && cc.q < ca.q && ca.q < cd.q
                    }
                    (Kind::Nw, Kind::Ne) => {
                        cc.p < ca.p && ca.p < cd.p && ca.q < cc.q && cc.q < cb.q
                    }
                    _ => segments_clash(ca, cb, cc, cd, a == c || a == d || b == c || b == d),
                };
                if clash {
                    return Err(Error::NotPlanar(format!(
                        "edges [{}, {}] and [{}, {}] cross",
                        self.labels[a], self.labels[b], self.labels[c], self.labels[d]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn coord(&self, v: usize) -> &Coord {
        &self.coords[v]
    }

    pub fn idx(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn vertex_at(&self, c: &Coord) -> Option<usize> {
        self.coord_index.get(c).copied()
    }

    pub fn vertices(&self) -> impl Iterator<Item = (usize, &str, &Coord)> {
        (0..self.n()).map(move |v| (v, self.labels[v].as_str(), &self.coords[v]))
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn is_edge(&self, u: usize, v: usize) -> bool {
        self.up[u].contains(&v)
    }

    /// Upper covers, ordered left to right.
    pub fn up_covers(&self, v: usize) -> &[usize] {
        &self.up[v]
    }

    /// Lower covers, ordered left to right.
    pub fn down_covers(&self, v: usize) -> &[usize] {
        &self.down[v]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.down_rows[b].get(a)
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet_t[a * self.n() + b] as usize
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join_t[a * self.n() + b] as usize
    }

    pub fn down_set(&self, v: usize) -> &Bits {
        &self.down_rows[v]
    }

    pub fn up_set(&self, v: usize) -> &Bits {
        &self.up_rows[v]
    }

    /// Greatest lower bound and least upper bound by label.
    pub fn bounds(&self, a: &str, b: &str) -> Result<(String, String)> {
        let (a, b) = (self.idx(a)?, self.idx(b)?);
        Ok((
            self.labels[self.meet(a, b)].clone(),
            self.labels[self.join(a, b)].clone(),
        ))
    }

    pub fn interval(&self, lo: usize, hi: usize) -> Vec<usize> {
        self.up_rows[lo]
            .and(&self.down_rows[hi])
            .ones()
            .collect()
    }

    pub fn classify(&self, u: usize, v: usize) -> SlopeClass {
        let dp = &self.coords[v].p - &self.coords[u].p;
        let dq = &self.coords[v].q - &self.coords[u].q;
        debug_assert!(dp >= Rat::zero() && dq >= Rat::zero());
        if dq.is_zero() {
            SlopeClass::NormalNe
        } else if dp.is_zero() {
            SlopeClass::NormalNw
        } else {
            SlopeClass::Precipitous
        }
    }

    pub fn classify_edge(&self, lo: &str, hi: &str) -> Result<SlopeClass> {
        let (u, v) = (self.idx(lo)?, self.idx(hi)?);
        if !self.is_edge(u, v) {
            return Err(Error::UnknownEdge(lo.to_string(), hi.to_string()));
        }
        Ok(self.classify(u, v))
    }

    pub fn irreducibles(&self) -> Irreducibles {
        let jir: Vec<usize> = (0..self.n())
            .filter(|&v| v != self.bottom && self.down[v].len() == 1)
            .collect();
        let mir: Vec<usize> = (0..self.n())
            .filter(|&v| v != self.top && self.up[v].len() == 1)
            .collect();
        let doubly = jir.iter().copied().filter(|v| mir.contains(v)).collect();
        Irreducibles { jir, mir, doubly }
    }

    /// Corners of the geometric rectangle spanned by the vertex set:
    /// `(pmin, pmax, qmin, qmax)`.
    pub fn full_rect(&self) -> (Rat, Rat, Rat, Rat) {
        let mut pmin = self.coords[0].p.clone();
        let mut pmax = pmin.clone();
        let mut qmin = self.coords[0].q.clone();
        let mut qmax = qmin.clone();
        for c in &self.coords {
            if c.p < pmin {
                pmin = c.p.clone();
            }
            if c.p > pmax {
                pmax = c.p.clone();
            }
            if c.q < qmin {
                qmin = c.q.clone();
            }
            if c.q > qmax {
                qmax = c.q.clone();
            }
        }
        (pmin, pmax, qmin, qmax)
    }

    /// Vertex lies on one of the four sides of the full rectangle.
    pub fn on_boundary(&self, v: usize) -> bool {
        let (pmin, pmax, qmin, qmax) = self.full_rect();
        let c = &self.coords[v];
        c.p == pmin || c.p == pmax || c.q == qmin || c.q == qmax
    }

    pub fn is_chain(&self) -> bool {
        (0..self.n()).all(|a| (0..self.n()).all(|b| self.leq(a, b) || self.leq(b, a)))
    }

    /// Length of the longest maximal chain, counted in edges.
    pub fn length(&self) -> usize {
        let mut order: Vec<usize> = (0..self.n()).collect();
        order.sort_by(|&a, &b| self.coords[a].height().cmp(&self.coords[b].height()));
        let mut depth = vec![0usize; self.n()];
        for &v in &order {
            for &u in &self.down[v] {
                depth[v] = depth[v].max(depth[u] + 1);
            }
        }
        depth[self.top]
    }

    pub fn occupied_p(&self) -> Vec<Rat> {
        let mut v: Vec<Rat> = self.coords.iter().map(|c| c.p.clone()).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn occupied_q(&self) -> Vec<Rat> {
        let mut v: Vec<Rat> = self.coords.iter().map(|c| c.q.clone()).collect();
        v.sort();
        v.dedup();
        v
    }
}

fn cross(o: &Coord, a: &Coord, b: &Coord) -> Rat {
    (&a.p - &o.p) * (&b.q - &o.q) - (&a.q - &o.q) * (&b.p - &o.p)
}

fn in_box(w: &Coord, a: &Coord, b: &Coord) -> bool {
    let (plo, phi) = if a.p <= b.p { (&a.p, &b.p) } else { (&b.p, &a.p) };
    let (qlo, qhi) = if a.q <= b.q { (&a.q, &b.q) } else { (&b.q, &a.q) };
    plo <= &w.p && &w.p <= phi && qlo <= &w.q && &w.q <= qhi
}

/// `w` lies on the segment `[a, b]` strictly between the endpoints.
pub fn point_on_open_segment(w: &Coord, a: &Coord, b: &Coord) -> bool {
    w != a && w != b && cross(a, b, w).is_zero() && in_box(w, a, b)
}

/// True when the segments meet anywhere other than a shared endpoint.
fn segments_clash(a: &Coord, b: &Coord, c: &Coord, d: &Coord, share_endpoint: bool) -> bool {
    let d1 = cross(c, d, a);
    let d2 = cross(c, d, b);
    let d3 = cross(a, b, c);
    let d4 = cross(a, b, d);
    let z = Rat::zero();
    if ((d1 > z && d2 < z) || (d1 < z && d2 > z)) && ((d3 > z && d4 < z) || (d3 < z && d4 > z)) {
        return true;
    }
    if d1.is_zero() && d2.is_zero() && d3.is_zero() && d4.is_zero() {
        // Collinear: any overlap beyond a single shared endpoint is a clash.
        let overlap = |p: &Coord| in_box(p, c, d);
        let mut shared = 0;
        for p in [a, b] {
            if overlap(p) && (p == c || p == d) {
                shared += 1;
            } else if overlap(p) {
                return true;
            }
        }
        for p in [c, d] {
            if in_box(p, a, b) && p != a && p != b {
                return true;
            }
        }
        return shared > 1;
    }
    if share_endpoint {
        return false;
    }
    // Endpoint of one segment in the interior of the other.
    (d1.is_zero() && in_box(a, c, d))
        || (d2.is_zero() && in_box(b, c, d))
        || (d3.is_zero() && in_box(c, a, b))
        || (d4.is_zero() && in_box(d, a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rint;

    fn c(p: i64, q: i64) -> Coord {
        Coord::new(rint(p), rint(q))
    }

    pub(crate) fn square() -> LatticeDiagram {
        LatticeDiagram::build(
            vec![
                ("0".into(), c(0, 0)),
                ("a".into(), c(1, 0)),
                ("b".into(), c(0, 1)),
                ("1".into(), c(1, 1)),
            ],
            &[
                ("0".into(), "a".into()),
                ("0".into(), "b".into()),
                ("a".into(), "1".into()),
                ("b".into(), "1".into()),
            ],
        )
        .unwrap()
    }

    #[test]
    fn builds_smallest_grid() {
        let d = square();
        assert_eq!(d.n(), 4);
        assert_eq!(d.label(d.bottom()), "0");
        assert_eq!(d.label(d.top()), "1");
        let (m, j) = d.bounds("a", "b").unwrap();
        assert_eq!((m.as_str(), j.as_str()), ("0", "1"));
    }

    #[test]
    fn bounds_idempotent() {
        let d = square();
        let (m, j) = d.bounds("a", "a").unwrap();
        assert_eq!((m.as_str(), j.as_str()), ("a", "a"));
    }

    #[test]
    fn rejects_two_maximal() {
        let r = LatticeDiagram::build(
            vec![
                ("0".into(), c(0, 0)),
                ("a".into(), c(1, 0)),
                ("b".into(), c(0, 1)),
            ],
            &[("0".into(), "a".into()), ("0".into(), "b".into())],
        );
        assert!(matches!(r, Err(Error::NotALattice(_))));
    }

    #[test]
    fn rejects_downward_and_slight() {
        let r = LatticeDiagram::build(
            vec![("0".into(), c(0, 0)), ("a".into(), c(2, -1))],
            &[("0".into(), "a".into())],
        );
        assert!(matches!(r, Err(Error::DownwardEdge(_, _))));
    }

    #[test]
    fn rejects_edge_through_vertex() {
        let r = LatticeDiagram::build(
            vec![
                ("0".into(), c(0, 0)),
                ("m".into(), c(1, 1)),
                ("t".into(), c(2, 2)),
            ],
            &[("0".into(), "t".into()), ("0".into(), "m".into())],
        );
        assert!(r.is_err());
    }

    #[test]
    fn rejects_crossing_edges() {
        // The middle edges cross at (3,3), which is not a vertex.
        let r = LatticeDiagram::build(
            vec![
                ("0".into(), c(0, 0)),
                ("a".into(), c(3, 1)),
                ("b".into(), c(1, 3)),
                ("c".into(), c(3, 5)),
                ("d".into(), c(5, 3)),
                ("t".into(), c(5, 5)),
            ],
            &[
                ("0".into(), "a".into()),
                ("0".into(), "b".into()),
                ("a".into(), "c".into()),
                ("b".into(), "d".into()),
                ("c".into(), "t".into()),
                ("d".into(), "t".into()),
            ],
        );
        assert!(matches!(r, Err(Error::NotPlanar(_))), "{r:?}");
    }

    #[test]
    fn rejects_redundant_cover() {
        let r = LatticeDiagram::build(
            vec![
                ("0".into(), c(0, 0)),
                ("m".into(), c(0, 1)),
                ("t".into(), c(1, 2)),
            ],
            &[
                ("0".into(), "m".into()),
                ("m".into(), "t".into()),
                ("0".into(), "t".into()),
            ],
        );
        assert!(matches!(r, Err(Error::RedundantCover(_, _))));
    }

    #[test]
    fn classifies_edges() {
        let d = square();
        assert_eq!(
            d.classify_edge("0", "a").unwrap(),
            SlopeClass::NormalNe
        );
        assert_eq!(
            d.classify_edge("0", "b").unwrap(),
            SlopeClass::NormalNw
        );
        assert!(d.classify_edge("0", "1").is_err());
    }

    #[test]
    fn irreducibles_of_square() {
        let d = square();
        let irr = d.irreducibles();
        let names =
            |v: &Vec<usize>| v.iter().map(|&i| d.label(i).to_string()).collect::<Vec<_>>();
        assert_eq!(names(&irr.jir), vec!["a", "b"]);
        assert_eq!(names(&irr.mir), vec!["a", "b"]);
        assert_eq!(names(&irr.doubly), vec!["a", "b"]);
    }
}
