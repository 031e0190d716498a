//! Building SR lattices: grids, multifork insertion at Enl-distributive
//! rectangular 4-cells, lamp widening, thrusting, recipe replay with
//! snapshots, and bounded enumeration.
//!
//! All geometric surgery goes through a draft of labelled vertices and
//! straight segments. New feet emit rays of normal slopes down to the
//! boundary; wherever a ray meets an existing segment a vertex is created,
//! and the cover relation is rebuilt by subdividing every segment at the
//! vertices lying on it. The final diagram is re-validated from scratch.

use std::collections::{BTreeMap, BTreeSet};

use num::Zero;
use serde::{Deserialize, Serialize};

use crate::diagram::{point_on_open_segment, Coord, LatticeDiagram, SlopeClass};
use crate::error::{Error, Result};
use crate::geometry::Territory;
use crate::lamps::{self, LampKind};
use crate::poset::Poset;
use crate::rat::{midpoint, Rat};
use crate::structure;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum Step {
    Multifork { cell_peak: String, k: usize },
    Thrust { lamp_peak: String, k: usize },
    Widen { lamp_peak: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Recipe {
    pub base: (usize, usize),
    pub steps: Vec<Step>,
}

impl Recipe {
    pub fn grid(m: usize, n: usize) -> Self {
        Recipe {
            base: (m, n),
            steps: Vec::new(),
        }
    }

    pub fn then(mut self, step: Step) -> Self {
        self.steps.push(step);
        self
    }
}

/// The `(m+1)(n+1)`-element grid with vertices at integer merge coordinates.
pub fn grid(m: usize, n: usize) -> Result<LatticeDiagram> {
    if m < 1 || n < 1 {
        return Err(Error::BadDimensions);
    }
    let mut vs = Vec::new();
    let mut es = Vec::new();
    for p in 0..=m {
        for q in 0..=n {
            vs.push((
                grid_label(p, q),
                Coord::new(Rat::from_integer((p as i64).into()), Rat::from_integer((q as i64).into())),
            ));
            if p > 0 {
                es.push((grid_label(p - 1, q), grid_label(p, q)));
            }
            if q > 0 {
                es.push((grid_label(p, q - 1), grid_label(p, q)));
            }
        }
    }
    LatticeDiagram::build(vs, &es)
}

pub fn grid_label(p: usize, q: usize) -> String {
    format!("g_{p}_{q}")
}

/// Mutable drawing: labelled vertices plus geometric segments. Covers are
/// recovered by subdividing each segment at all vertices on it.
struct Draft {
    verts: Vec<(String, Coord)>,
    segments: Vec<(Coord, Coord)>,
}

impl Draft {
    fn from_diagram(d: &LatticeDiagram) -> Self {
        let verts = d
            .vertices()
            .map(|(_, l, c)| (l.to_string(), c.clone()))
            .collect();
        let segments = d
            .covers()
            .iter()
            .map(|&(u, v)| (d.coord(u).clone(), d.coord(v).clone()))
            .collect();
        Draft { verts, segments }
    }

    fn has_vertex(&self, c: &Coord) -> bool {
        self.verts.iter().any(|(_, v)| v == c)
    }

    fn occupied_p(&self) -> Vec<Rat> {
        let mut v: Vec<Rat> = self.verts.iter().map(|(_, c)| c.p.clone()).collect();
        v.sort();
        v.dedup();
        v
    }

    fn occupied_q(&self) -> Vec<Rat> {
        let mut v: Vec<Rat> = self.verts.iter().map(|(_, c)| c.q.clone()).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Adds a multifork with the given feet (left to right: `p` ascending,
    /// `q` descending) and tube segments up to `peak`. Rays of normal slopes
    /// run from each foot to the lower boundary sides; crossings with
    /// existing normal segments become vertices, crossing a precipitous
    /// segment is an error.
    fn add_fork(&mut self, peak: &Coord, feet: &[Coord], step: usize) -> Result<()> {
        let (pmin, qmin) = self.mins();
        let mut new_coords: BTreeSet<Coord> = BTreeSet::new();
        // Feet and their pairwise meets.
        for f in feet {
            new_coords.insert(f.clone());
        }
        for (i, fi) in feet.iter().enumerate() {
            for fj in &feet[i + 1..] {
                new_coords.insert(Coord::new(fi.p.clone(), fj.q.clone()));
            }
        }
        // Ray-segment crossings.
        for f in feet {
            for (a, b) in &self.segments {
                let (lo, hi) = if a.height() <= b.height() { (a, b) } else { (b, a) };
                let dp = &hi.p - &lo.p;
                let dq = &hi.q - &lo.q;
                if dp > Rat::from_integer(0.into()) && dq > Rat::from_integer(0.into()) {
                    // precipitous segment: rays must not cross it
                    let crosses_left = lo.q < f.q && f.q < hi.q && {
                        let pc = &lo.p + (&f.q - &lo.q) * &dp / &dq;
                        pmin <= pc && pc < f.p
                    };
                    let crosses_down = lo.p < f.p && f.p < hi.p && {
                        let qc = &lo.q + (&f.p - &lo.p) * &dq / &dp;
                        qmin <= qc && qc < f.q
                    };
                    if crosses_left || crosses_down {
                        return Err(Error::NotDistributive(
                            format!("({}, {})", f.p, f.q),
                            "a ray would cross a precipitous edge".into(),
                        ));
                    }
                    continue;
                }
                if dp.is_zero() {
                    // constant-p segment: crossed by the horizontal ray at q(f)
                    if lo.q < f.q && f.q < hi.q && pmin <= lo.p && lo.p <= f.p {
                        new_coords.insert(Coord::new(lo.p.clone(), f.q.clone()));
                    }
                } else {
                    // constant-q segment: crossed by the vertical ray at p(f)
                    if lo.p < f.p && f.p < hi.p && qmin <= lo.q && lo.q <= f.q {
                        new_coords.insert(Coord::new(f.p.clone(), lo.q.clone()));
                    }
                }
            }
        }
        // Materialize new vertices with deterministic labels.
        let mut foot_set: Vec<Coord> = feet.to_vec();
        foot_set.sort();
        let mut xi = 0usize;
        for c in new_coords {
            if self.has_vertex(&c) {
                continue;
            }
            let label = if let Some(i) = feet.iter().position(|f| *f == c) {
                format!("s{step}_f{}", i + 1)
            } else {
                xi += 1;
                format!("s{step}_x{xi}")
            };
            self.verts.push((label, c));
        }
        let _ = foot_set;
        // Tubes and rays as segments.
        for f in feet {
            self.segments.push((f.clone(), peak.clone()));
            if f.q != qmin {
                self.segments
                    .push((Coord::new(f.p.clone(), qmin.clone()), f.clone()));
            }
            if f.p != pmin {
                self.segments
                    .push((Coord::new(pmin.clone(), f.q.clone()), f.clone()));
            }
        }
        Ok(())
    }

    fn mins(&self) -> (Rat, Rat) {
        let mut pmin = self.verts[0].1.p.clone();
        let mut qmin = self.verts[0].1.q.clone();
        for (_, c) in &self.verts {
            if c.p < pmin {
                pmin = c.p.clone();
            }
            if c.q < qmin {
                qmin = c.q.clone();
            }
        }
        (pmin, qmin)
    }

    /// Rebuild covers from subdivided segments and validate everything.
    fn build(&self) -> Result<LatticeDiagram> {
        let mut covers: BTreeSet<(String, String)> = BTreeSet::new();
        for (a, b) in &self.segments {
            let (lo, hi) = if a.height() <= b.height() { (a, b) } else { (b, a) };
            let axis_ne = lo.q == hi.q;
            let axis_nw = lo.p == hi.p;
            let mut on: Vec<&(String, Coord)> = self
                .verts
                .iter()
                .filter(|(_, c)| {
                    if axis_ne {
                        c.q == lo.q && lo.p <= c.p && c.p <= hi.p
                    } else if axis_nw {
                        c.p == lo.p && lo.q <= c.q && c.q <= hi.q
                    } else {
                        c == lo || c == hi || point_on_open_segment(c, lo, hi)
                    }
                })
                .collect();
            on.sort_by(|x, y| x.1.height().cmp(&y.1.height()).then(x.1.p.cmp(&y.1.p)));
            for w in on.windows(2) {
                covers.insert((w[0].0.clone(), w[1].0.clone()));
            }
        }
        let covers: Vec<(String, String)> = covers.into_iter().collect();
        LatticeDiagram::build(self.verts.clone(), &covers)
    }
}

fn sorted_contains(sorted: &[Rat], x: &Rat) -> bool {
    sorted.binary_search(x).is_ok()
}

/// Midpoint of `(lo, hi)`, nudged upward until it avoids the occupied values.
fn pick_free(lo: &Rat, hi: &Rat, occupied: &[Rat]) -> Rat {
    let mut x = midpoint(lo, hi);
    while sorted_contains(occupied, &x) {
        x = midpoint(&x, hi);
    }
    x
}

/// Largest occupied value strictly below `v` (there is always one for the
/// targets used here).
fn gap_below(v: &Rat, occupied: &[Rat]) -> Rat {
    occupied
        .iter()
        .rev()
        .find(|&x| x < v)
        .cloned()
        .expect("a value below the target exists")
}

/// Inserts a `k`-fold multifork at the rectangular Enl-distributive 4-cell
/// with the given peak. Feet are placed by window bisection inside the cell,
/// avoiding every occupied coordinate, so rays never pass through existing
/// vertices.
pub fn insert_multifork(
    d: &LatticeDiagram,
    cell_peak: &str,
    k: usize,
    step: usize,
) -> Result<LatticeDiagram> {
    assert!(k >= 1);
    let peak = d.idx(cell_peak)?;
    let cell = structure::find_cell(d, peak)
        .ok_or_else(|| Error::CellNotFound(cell_peak.to_string()))?;
    if !cell.rectangular {
        return Err(Error::NotRectangular(cell_peak.to_string()));
    }
    if !cell.enl_distributive {
        return Err(Error::NotDistributive(
            cell_peak.to_string(),
            "a precipitous edge segment lies in the cell's illuminated set".into(),
        ));
    }
    let cb = d.coord(cell.bottom).clone();
    let ct = d.coord(cell.peak).clone();
    for (_, label, c) in d.vertices() {
        if cb.p < c.p && c.p < ct.p && cb.q < c.q && c.q < ct.q {
            return Err(Error::NotSr(format!("vertex {label} inside 4-cell")));
        }
    }
    let mut draft = Draft::from_diagram(d);
    let occ_p = draft.occupied_p();
    let occ_q = draft.occupied_q();
    let dp = &ct.p - &cb.p;
    let dq = &ct.q - &cb.q;
    let kr = Rat::from_integer((k as i64).into());
    let mut feet = Vec::with_capacity(k);
    for i in 0..k {
        let ir = Rat::from_integer((i as i64).into());
        let one = Rat::from_integer(1.into());
        let plo = &cb.p + &dp * &ir / &kr;
        let phi = &cb.p + &dp * (&ir + &one) / &kr;
        let qlo = &cb.q + &dq * (&kr - &ir - &one) / &kr;
        let qhi = &cb.q + &dq * (&kr - &ir) / &kr;
        feet.push(Coord::new(
            pick_free(&plo, &phi, &occ_p),
            pick_free(&qlo, &qhi, &occ_q),
        ));
    }
    draft.add_fork(&ct, &feet, step)?;
    draft.build()
}

/// Thrusts a `k`-fold lamp atop the lamp addressed by `label`. Returns the
/// new diagram together with the relabelling of old roof vertices to their
/// floor twins (in particular the old peak maps to the new lamp's foot).
pub fn thrust_lamp(
    d: &LatticeDiagram,
    label: &str,
    k: usize,
    step: usize,
) -> Result<(LatticeDiagram, BTreeMap<String, String>)> {
    assert!(k >= 1);
    let all = lamps::lamps(d);
    let li = lamps::find_lamp(d, &all, label)?;
    let lamp = &all[li];
    if !lamp.is_internal() && k != 1 {
        return Err(Error::BadK);
    }
    let peak = lamp.peak;
    let cp = d.coord(peak).clone();
    let (pmin, _pmax, qmin, _qmax) = d.full_rect();
    let occ_p = d.occupied_p();
    let occ_q = d.occupied_q();

    // Free band just below the roof; degenerate on the boundary side of a
    // boundary lamp.
    let p_new = if lamp.kind == LampKind::RightBoundary {
        cp.p.clone()
    } else {
        midpoint(&gap_below(&cp.p, &occ_p), &cp.p)
    };
    let q_new = if lamp.kind == LampKind::LeftBoundary {
        cp.q.clone()
    } else {
        midpoint(&gap_below(&cp.q, &occ_q), &cp.q)
    };
    let foot_i = Coord::new(p_new.clone(), q_new.clone());

    // Roof vertices and their twins.
    let mut twin: BTreeMap<usize, Coord> = BTreeMap::new();
    for (v, _, c) in d.vertices() {
        if v == peak {
            continue;
        }
        let on_lroof = c.q == cp.q && c.p < cp.p;
        let on_rroof = c.p == cp.p && c.q < cp.q;
        if on_lroof {
            let t = Coord::new(c.p.clone(), q_new.clone());
            if t != *c {
                twin.insert(v, t);
            }
        } else if on_rroof {
            let t = Coord::new(p_new.clone(), c.q.clone());
            if t != *c {
                twin.insert(v, t);
            }
        }
    }

    let roof_or_peak = |v: usize| -> bool {
        let c = d.coord(v);
        v == peak || (c.q == cp.q && c.p <= cp.p) || (c.p == cp.p && c.q <= cp.q)
    };

    let mut verts: Vec<(String, Coord)> = d
        .vertices()
        .map(|(_, l, c)| (l.to_string(), c.clone()))
        .collect();
    let mut rename: BTreeMap<String, String> = BTreeMap::new();
    let mut twin_label: BTreeMap<usize, String> = BTreeMap::new();
    let mut sorted_twins: Vec<(usize, Coord)> = twin.iter().map(|(&v, c)| (v, c.clone())).collect();
    sorted_twins.sort_by(|a, b| a.1.cmp(&b.1));
    for (j, (v, c)) in sorted_twins.iter().enumerate() {
        let lbl = format!("s{step}_t{}", j + 1);
        twin_label.insert(*v, lbl.clone());
        rename.insert(d.label(*v).to_string(), lbl.clone());
        verts.push((lbl, c.clone()));
    }
    let foot_label = if k == 1 {
        format!("s{step}_f1")
    } else {
        format!("s{step}_t0")
    };
    rename.insert(d.label(peak).to_string(), foot_label.clone());
    verts.push((foot_label, foot_i.clone()));

    // Segments: kept and rewired old edges, drops, floor arms.
    let mut segments: Vec<(Coord, Coord)> = Vec::new();
    for &(u, v) in d.covers() {
        let keep = !roof_or_peak(v) || roof_or_peak(u);
        if keep {
            segments.push((d.coord(u).clone(), d.coord(v).clone()));
        } else if v == peak {
            segments.push((d.coord(u).clone(), foot_i.clone()));
        } else if let Some(t) = twin.get(&v) {
            segments.push((d.coord(u).clone(), t.clone()));
        } else {
            // boundary-side roof vertex without a twin keeps its edge
            segments.push((d.coord(u).clone(), d.coord(v).clone()));
        }
    }
    for (v, t) in &twin {
        segments.push((t.clone(), d.coord(*v).clone()));
    }
    // Floor arms through the new foot.
    if p_new != pmin {
        segments.push((Coord::new(pmin.clone(), q_new.clone()), foot_i.clone()));
    }
    if q_new != qmin {
        segments.push((Coord::new(p_new.clone(), qmin.clone()), foot_i.clone()));
    }

    let mut draft = Draft { verts, segments };

    // Fork feet spanning the band: the first sits on the vertical floor line,
    // the last on the horizontal one, so the meet staircase reaches the foot.
    let kr = Rat::from_integer((k as i64).into());
    let mut feet = Vec::with_capacity(k);
    for m in 0..k {
        let mr = Rat::from_integer((m as i64).into());
        let p = &p_new + (&cp.p - &p_new) * &mr / &kr;
        let q = &q_new + (&cp.q - &q_new) * (&kr - &mr - Rat::from_integer(1.into())) / &kr;
        feet.push(Coord::new(p, q));
    }
    if k == 1 {
        feet[0] = foot_i.clone();
    } else {
        feet[0].p = p_new.clone();
        feet[k - 1].q = q_new.clone();
    }
    draft.add_fork(&cp, &feet, step)?;
    let built = draft.build()?;
    Ok((built, rename))
}

/// Adds a new leftmost neon tube to an internal lamp, preserving the lamp
/// poset (checked; the foot placement is refined toward the old leftmost
/// foot on failure).
///
/// Some nested configurations admit no placement at all in the fixed
/// diagram: the new foot's boundary rays would have to pierce the tubes of
/// a lamp sitting underneath, and moving the foot out of their way drags
/// the widened lamp's floor across that lamp's foot. Those cases end in
/// `PlacementFailure` rather than a silently changed lamp poset.
pub fn widen_lamp(d: &LatticeDiagram, label: &str, step: usize) -> Result<LatticeDiagram> {
    let all = lamps::lamps(d);
    let li = lamps::find_lamp(d, &all, label)?;
    let lamp = &all[li];
    if !lamp.is_internal() {
        return Err(Error::BoundaryLamp(label.to_string()));
    }
    // The new foot hugs the old leftmost tube foot from the upper left: its
    // p just below, its q just above, inside the free coordinate gaps. A
    // placement further left would drag the lamp's floor across other feet
    // and change the lamp poset.
    let f1 = lamp.tubes[0].0;
    let cf = d.coord(f1).clone();
    let occ_p = d.occupied_p();
    let occ_q = d.occupied_q();
    let p_lo = gap_below(&cf.p, &occ_p);
    let q_hi = occ_q
        .iter()
        .find(|&x| x > &cf.q)
        .cloned()
        .expect("the roof is above every tube foot");

    let before = lamps::lamp_poset(d, &all);
    let keys_before: Vec<String> = all.iter().map(|l| lamp_key(d, l)).collect();

    let mut lo_p = p_lo;
    let mut hi_q = q_hi;
    for _attempt in 0..8 {
        let fp = midpoint(&lo_p, &cf.p);
        let fq = midpoint(&cf.q, &hi_q);
        let mut draft = Draft::from_diagram(d);
        let foot = Coord::new(fp.clone(), fq.clone());
        let built = (|| -> Result<LatticeDiagram> {
            draft.add_fork(d.coord(lamp.peak), &[foot], step)?;
            draft.build()
        })();
        if let Ok(nd) = built {
            if widen_preserves_poset(&nd, &before, &keys_before) {
                return Ok(nd);
            }
        }
        // refine toward the old foot
        lo_p = fp;
        hi_q = fq;
    }
    Err(Error::PlacementFailure(8))
}

/// Stable identity of a lamp across widening: boundary lamps keep their
/// feet, internal lamps are determined by their peaks.
fn lamp_key(d: &LatticeDiagram, lamp: &lamps::Lamp) -> String {
    if lamp.is_internal() {
        format!("p:{}", d.label(lamp.peak))
    } else {
        format!("f:{}", d.label(lamp.foot))
    }
}

fn widen_preserves_poset(nd: &LatticeDiagram, before: &Poset, keys_before: &[String]) -> bool {
    let ls = lamps::lamps(nd);
    if ls.len() != keys_before.len() {
        return false;
    }
    let after = lamps::lamp_poset(nd, &ls);
    let mut map = Vec::with_capacity(ls.len());
    for lamp in &ls {
        match keys_before.iter().position(|k| *k == lamp_key(nd, lamp)) {
            Some(j) => map.push(j),
            None => return false,
        }
    }
    for a in 0..ls.len() {
        for b in 0..ls.len() {
            if after.leq(a, b) != before.leq(map[a], map[b]) {
                return false;
            }
        }
    }
    true
}

#[derive(Clone, Debug)]
pub struct BuildState {
    pub recipe: Recipe,
    /// `snapshots[0]` is the base grid; `snapshots[i+1]` is the state after
    /// step `i`.
    pub snapshots: Vec<LatticeDiagram>,
    /// Birth step of each internal lamp, keyed by current peak label.
    pub birth: BTreeMap<String, usize>,
}

impl BuildState {
    pub fn current(&self) -> &LatticeDiagram {
        self.snapshots.last().unwrap()
    }

    /// First snapshot containing a vertex at the given position.
    pub fn birth_of_coord(&self, c: &Coord) -> Option<usize> {
        self.snapshots.iter().position(|s| s.vertex_at(c).is_some())
    }
}

/// Applies one step, returning the new diagram and the label renaming it
/// induces (non-empty only for thrusting).
pub fn apply_step(
    d: &LatticeDiagram,
    step: &Step,
    index: usize,
) -> Result<(LatticeDiagram, BTreeMap<String, String>)> {
    match step {
        Step::Multifork { cell_peak, k } => {
            let nd = insert_multifork(d, cell_peak, *k, index)?;
            Ok((nd, BTreeMap::new()))
        }
        Step::Thrust { lamp_peak, k } => thrust_lamp(d, lamp_peak, *k, index),
        Step::Widen { lamp_peak } => {
            let nd = widen_lamp(d, lamp_peak, index)?;
            Ok((nd, BTreeMap::new()))
        }
    }
}

/// Deterministic replay: every snapshot is validated to be an SR lattice
/// with a C1 diagram.
pub fn replay(recipe: &Recipe) -> Result<BuildState> {
    let base = grid(recipe.base.0, recipe.base.1)?;
    let mut state = BuildState {
        recipe: recipe.clone(),
        snapshots: vec![base],
        birth: BTreeMap::new(),
    };
    for (i, step) in recipe.steps.iter().enumerate() {
        // The new lamp of a thrust keeps the target's peak label; resolve it
        // before the surgery renames things.
        let thrust_target = thrust_birth_key(state.current(), step).map_err(|e| e.at_step(i))?;
        let (nd, rename) = apply_step(state.current(), step, i).map_err(|e| e.at_step(i))?;
        if !structure::check_sr(&nd).pass() || !structure::check_c1(&nd).pass() {
            return Err(Error::NotSr(format!("step {i} broke the SR/C1 invariants")));
        }
        if !rename.is_empty() {
            state.birth = state
                .birth
                .iter()
                .map(|(k, &v)| (rename.get(k).cloned().unwrap_or_else(|| k.clone()), v))
                .collect();
        }
        match step {
            Step::Multifork { cell_peak, .. } => {
                state.birth.insert(cell_peak.clone(), i);
            }
            Step::Thrust { .. } => {
                if let Some(peak_label) = thrust_target {
                    state.birth.insert(peak_label, i);
                }
            }
            Step::Widen { .. } => {}
        }
        state.snapshots.push(nd);
    }
    Ok(state)
}

/// For a thrust step, the birth-map key of the new lamp: the target's peak
/// label (kept by the new lamp), provided the new lamp will be internal.
pub(crate) fn thrust_birth_key(d: &LatticeDiagram, step: &Step) -> Result<Option<String>> {
    if let Step::Thrust { lamp_peak, .. } = step {
        let ls = lamps::lamps(d);
        let j = lamps::find_lamp(d, &ls, lamp_peak)?;
        if ls[j].is_internal() {
            return Ok(Some(d.label(ls[j].peak).to_string()));
        }
    }
    Ok(None)
}

/// Original territory of a neon tube: the 4-cell regions of its trajectory
/// in the snapshot where the tube was born, and the lower half (the cells
/// not containing the tube's peak).
pub fn original_territory(
    state: &BuildState,
    tube_foot: &str,
) -> Result<(Territory, Territory)> {
    let d = state.current();
    let f = d.idx(tube_foot)?;
    if d.up_covers(f).len() != 1 {
        return Err(Error::NotANeonTube(
            tube_foot.to_string(),
            "?".to_string(),
        ));
    }
    let birth = state
        .birth_of_coord(d.coord(f))
        .ok_or(Error::NoRecipe)?;
    let snap = &state.snapshots[birth];
    let trajs = lamps::trajectories(snap);
    let cells = structure::four_cells(snap);
    territory_in_snapshot(snap, &trajs, &cells, d.coord(f))
}

fn territory_in_snapshot(
    snap: &LatticeDiagram,
    trajs: &[lamps::Trajectory],
    cells: &[structure::FourCell],
    foot: &Coord,
) -> Result<(Territory, Territory)> {
    let fs = snap.vertex_at(foot).expect("foot exists in its birth snapshot");
    let ups = snap.up_covers(fs);
    assert_eq!(ups.len(), 1, "a tube foot is meet-irreducible at birth");
    let peak_s = ups[0];
    let traj = lamps::trajectory_of(trajs, (fs, peak_s)).expect("edge has a trajectory");
    let cell_ids = lamps::trajectory_cells(snap, cells, traj);
    let mut ot = Vec::new();
    let mut lhot = Vec::new();
    for ci in cell_ids {
        let cell = &cells[ci];
        let quad = cell.quad(snap);
        let contains_peak = [cell.bottom, cell.left, cell.right, cell.peak].contains(&peak_s);
        ot.push(quad.clone());
        if !contains_peak {
            lhot.push(quad);
        }
    }
    Ok((Territory::Quads(ot), Territory::Quads(lhot)))
}

/// Usage of neon tubes per the widening machinery: a tube is used when a
/// precipitous edge segment of the final lattice lies in the lower half of
/// its original territory.
pub struct TubeUsage {
    /// `(foot label, used)` per neon tube of the final lattice.
    pub used: BTreeMap<String, bool>,
    /// `(internal lamp foot, tube foot)` pairs where the lamp uses the tube.
    pub uses: BTreeSet<(String, String)>,
}

pub fn used_neon_tubes(state: &BuildState) -> Result<TubeUsage> {
    let d = state.current();
    let all = lamps::lamps(d);
    let precipitous: Vec<(usize, usize)> = d
        .covers()
        .iter()
        .copied()
        .filter(|&(u, v)| d.classify(u, v) == SlopeClass::Precipitous)
        .collect();
    let mut cache: BTreeMap<usize, (Vec<lamps::Trajectory>, Vec<structure::FourCell>)> =
        BTreeMap::new();
    let mut used = BTreeMap::new();
    let mut uses = BTreeSet::new();
    for lamp in &all {
        for &(f, _) in &lamp.tubes {
            let foot_label = d.label(f).to_string();
            let birth = state.birth_of_coord(d.coord(f)).ok_or(Error::NoRecipe)?;
            let snap = &state.snapshots[birth];
            let (trajs, cells) = cache.entry(birth).or_insert_with(|| {
                (lamps::trajectories(snap), structure::four_cells(snap))
            });
            let (_, lhot) = territory_in_snapshot(snap, trajs, cells, d.coord(f))?;
            let mut any = false;
            for &(u, v) in &precipitous {
                if lhot.contains_segment(d.coord(u), d.coord(v)) {
                    any = true;
                    // which lamp owns this precipitous edge
                    if let Some(owner) = lamps::tube_owner(&all, (u, v)) {
                        uses.insert((
                            d.label(all[owner].foot).to_string(),
                            foot_label.clone(),
                        ));
                    }
                }
            }
            used.insert(foot_label, any);
        }
    }
    Ok(TubeUsage { used, uses })
}

#[derive(Clone, Copy, Debug)]
pub struct Budget {
    pub max_steps: usize,
    pub max_k: usize,
    pub max_grid: usize,
}

/// Lazy depth-first enumeration of all recipes within the budget: all grids
/// up to `max_grid`, then multifork steps at every eligible (rectangular,
/// Enl-distributive) 4-cell with `k <= max_k`.
pub struct EnumerateSr {
    budget: Budget,
    stack: Vec<BuildState>,
    pending_grids: Vec<(usize, usize)>,
}

pub fn enumerate_sr(budget: Budget) -> EnumerateSr {
    let mut grids = Vec::new();
    for m in 1..=budget.max_grid {
        for n in 1..=budget.max_grid {
            grids.push((m, n));
        }
    }
    grids.reverse();
    EnumerateSr {
        budget,
        stack: Vec::new(),
        pending_grids: grids,
    }
}

/// Eligible insertion targets of a diagram: peaks of rectangular
/// Enl-distributive 4-cells, sorted by label.
pub fn eligible_cells(d: &LatticeDiagram) -> Vec<String> {
    let mut v: Vec<String> = structure::four_cells(d)
        .into_iter()
        .filter(|c| c.rectangular && c.enl_distributive)
        .map(|c| d.label(c.peak).to_string())
        .collect();
    v.sort();
    v
}

impl EnumerateSr {
    fn expand(&mut self, state: &BuildState) {
        if state.recipe.steps.len() >= self.budget.max_steps {
            return;
        }
        let step_ix = state.recipe.steps.len();
        let mut children = Vec::new();
        for peak in eligible_cells(state.current()) {
            for k in 1..=self.budget.max_k {
                children.push(Step::Multifork {
                    cell_peak: peak.clone(),
                    k,
                });
            }
        }
        for step in children.into_iter().rev() {
            let (nd, rename) = match apply_step(state.current(), &step, step_ix) {
                Ok(x) => x,
                Err(_) => continue,
            };
            debug_assert!(rename.is_empty());
            let mut child = state.clone();
            child.recipe.steps.push(step.clone());
            if let Step::Multifork { cell_peak, .. } = &step {
                child.birth.insert(cell_peak.clone(), step_ix);
            }
            child.snapshots.push(nd);
            self.stack.push(child);
        }
    }
}

impl Iterator for EnumerateSr {
    type Item = BuildState;

    fn next(&mut self) -> Option<BuildState> {
        loop {
            if let Some(state) = self.stack.pop() {
                self.expand(&state);
                return Some(state);
            }
            let (m, n) = self.pending_grids.pop()?;
            let base = grid(m, n).expect("budget grids are valid");
            let state = BuildState {
                recipe: Recipe::grid(m, n),
                snapshots: vec![base],
                birth: BTreeMap::new(),
            };
            self.stack.push(state);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `S_k`: k-fold multifork into the only cell of the unit grid.
    pub(crate) fn s_k(k: usize) -> LatticeDiagram {
        let d = grid(1, 1).unwrap();
        insert_multifork(&d, "g_1_1", k, 0).unwrap()
    }

    #[test]
    fn grid_counts() {
        assert_eq!(grid(1, 1).unwrap().n(), 4);
        assert_eq!(grid(2, 3).unwrap().n(), 12);
        assert!(matches!(grid(0, 2), Err(Error::BadDimensions)));
    }

    #[test]
    fn s_k_counts_and_structure() {
        for k in 1..=4usize {
            let d = s_k(k);
            assert_eq!(d.n(), 4 + 3 * k + k * (k - 1) / 2, "size of S_{k}");
            assert!(structure::check_sr(&d).pass());
            assert!(structure::check_c1(&d).pass());
            assert_eq!(d.length(), k + 2);
            assert_eq!(d.down_covers(d.top()).len(), k + 2);
            let internal_tubes = lamps::neon_tubes(&d)
                .into_iter()
                .filter(|&(u, _)| !d.on_boundary(u))
                .count();
            assert_eq!(internal_tubes, k);
        }
    }

    #[test]
    fn s2_has_two_doubly_irreducible() {
        let d = s_k(2);
        assert_eq!(d.irreducibles().doubly.len(), 2);
    }

    #[test]
    fn insert_rejects_bad_targets() {
        let d = grid(1, 1).unwrap();
        assert!(matches!(
            insert_multifork(&d, "g_0_1", 1, 0),
            Err(Error::CellNotFound(_))
        ));
        let s1 = s_k(1);
        // the two cells flanking the tube are not rectangular
        let flank = s1
            .down_covers(s1.top())
            .iter()
            .copied()
            .find(|&v| {
                structure::find_cell(&s1, s1.top()).is_none() && v != 0
            });
        let _ = flank;
        let cells = structure::four_cells(&s1);
        let nonrect: Vec<_> = cells.iter().filter(|c| !c.rectangular).collect();
        assert_eq!(nonrect.len(), 2);
        for c in nonrect {
            assert!(matches!(
                insert_multifork(&s1, s1.label(c.peak), 1, 1),
                Err(Error::NotRectangular(_)) | Err(Error::CellNotFound(_))
            ));
        }
    }

    #[test]
    fn replay_is_deterministic() {
        let recipe = Recipe::grid(1, 1).then(Step::Multifork {
            cell_peak: "g_1_1".into(),
            k: 2,
        });
        let a = replay(&recipe).unwrap();
        let b = replay(&recipe).unwrap();
        let la: Vec<_> = a.current().vertices().map(|(_, l, c)| (l.to_string(), c.clone())).collect();
        let lb: Vec<_> = b.current().vertices().map(|(_, l, c)| (l.to_string(), c.clone())).collect();
        assert_eq!(la, lb);
    }

    #[test]
    fn enumerate_zero_steps() {
        let states: Vec<_> = enumerate_sr(Budget {
            max_steps: 0,
            max_k: 1,
            max_grid: 2,
        })
        .collect();
        assert_eq!(states.len(), 4);
        assert!(states.iter().all(|s| s.recipe.steps.is_empty()));
    }

    #[test]
    fn enumerate_one_step_unit_grid() {
        let states: Vec<_> = enumerate_sr(Budget {
            max_steps: 1,
            max_k: 2,
            max_grid: 1,
        })
        .collect();
        // grid(1,1), S1, S2
        assert_eq!(states.len(), 3);
    }
}
