//! Invariant suites run by the command line `check` and `corpus` commands.

use std::collections::BTreeSet;
use std::time::Instant;

use crate::congruence::{self, con_lattice, principal_congruence, Partition, SwingIndex};
use crate::constructions::BuildState;
use crate::diagram::{Coord, LatticeDiagram};
use crate::error::Result;
use crate::geometry;
use crate::lamps;
use crate::quotient;
use crate::realize;
use crate::report::Report;
use crate::structure;

pub const SUITES: &[&str] = &[
    "structure",
    "lamps",
    "congruence",
    "quotient",
    "representability",
    "all",
];

pub fn run_suite(d: &LatticeDiagram, state: Option<&BuildState>, suite: &str) -> Result<Report> {
    let start = Instant::now();
    let mut report = Report::new(suite.to_string());
    match suite {
        "structure" => structure_suite(d, &mut report),
        "lamps" => lamps_suite(d, state, &mut report),
        "congruence" => congruence_suite(d, &mut report),
        "quotient" => quotient_suite(d, &mut report),
        "representability" => report.merge(realize::validate_representability(d)),
        "all" => {
            structure_suite(d, &mut report);
            lamps_suite(d, state, &mut report);
            congruence_suite(d, &mut report);
            quotient_suite(d, &mut report);
            report.merge(realize::validate_representability(d));
        }
        other => {
            return Err(crate::error::Error::UnknownLabel(format!(
                "suite {other} (expected one of {SUITES:?})"
            )))
        }
    }
    report.millis = start.elapsed().as_millis();
    Ok(report)
}

fn structure_suite(d: &LatticeDiagram, report: &mut Report) {
    report.merge(structure::check_sr(d));
    report.merge(structure::check_c1(d));
    match structure::boundary(d) {
        Ok(_) => report.record("boundary-supports-geometric", true, None),
        Err(e) => report.record("boundary-supports-geometric", false, Some(e.to_string())),
    }
    // Serialization round trip is byte-identical.
    let json = crate::io::lattice_to_json(d);
    let round = crate::io::lattice_from_json(&json)
        .map(|d2| crate::io::lattice_to_json(&d2) == json)
        .unwrap_or(false);
    report.record("serialization-round-trip", round, None);
}

/// Rectangular intervals of the diagram: non-chain intervals `[a, b]` whose
/// region is a normally bordered box with corner vertices.
fn rectangular_intervals(d: &LatticeDiagram) -> Vec<(usize, usize)> {
    let mut result = Vec::new();
    for a in 0..d.n() {
        for b in 0..d.n() {
            if !d.lt(a, b) {
                continue;
            }
            let (ca, cb) = (d.coord(a), d.coord(b));
            if ca.p >= cb.p || ca.q >= cb.q {
                continue;
            }
            let lc = d.vertex_at(&Coord::new(ca.p.clone(), cb.q.clone()));
            let rc = d.vertex_at(&Coord::new(cb.p.clone(), ca.q.clone()));
            if let (Some(lc), Some(rc)) = (lc, rc) {
                if d.leq(a, lc) && d.leq(lc, b) && d.leq(a, rc) && d.leq(rc, b) {
                    result.push((a, b));
                }
            }
        }
    }
    result
}

fn lamps_suite(d: &LatticeDiagram, state: Option<&BuildState>, report: &mut Report) {
    let all = lamps::lamps(d);
    let feet: BTreeSet<usize> = all.iter().map(|l| l.foot).collect();
    report.record("lamp-determined-by-foot", feet.len() == all.len(), None);

    let trajs = lamps::trajectories(d);
    let irr = d.irreducibles();
    report.record(
        "trajectory-tops-are-tubes",
        trajs.iter().all(|t| irr.mir.contains(&t.top.0)),
        None,
    );
    let tube_count: usize = all.iter().map(|l| l.tubes.len()).sum();
    report.record(
        "every-tube-in-one-lamp",
        tube_count == lamps::neon_tubes(d).len(),
        None,
    );

    let rel = lamps::lamp_relations(d, &all);
    report.record("rho-relations-coincide", rel.equal, None);

    let poset = lamps::lamp_poset(d, &all);
    let maximal: BTreeSet<usize> = poset.maximal().into_iter().collect();
    let boundary: BTreeSet<usize> = (0..all.len()).filter(|&i| !all[i].is_internal()).collect();
    report.record("boundary-lamps-are-the-maximal-lamps", maximal == boundary, None);

    let mut covers_ok = true;
    let mut two_cover = true;
    for i in 0..all.len() {
        if !all[i].is_internal() {
            continue;
        }
        let mut min = match lamps::lamp_covers(d, &all, &trajs, &poset, i) {
            Ok(m) => m,
            Err(_) => {
                covers_ok = false;
                continue;
            }
        };
        min.sort();
        let mut direct = poset.upper_covers(i);
        direct.sort();
        if min != direct {
            covers_ok = false;
        }
        if direct.len() > 2 {
            two_cover = false;
        }
    }
    report.record("lamp-covers-min-nwl-nel", covers_ok, None);
    report.record("two-cover", two_cover, None);
    report.record("dioecious", !poset.has_two_chain_filter(), None);

    for lamp in &all {
        lamps::validate_rungs(d, lamp, report);
        if lamp.is_internal() {
            lamps::validate_lamp_regions(d, lamp, report);
        }
    }
    let rects = rectangular_intervals(d);

    // Body = LEnl ∩ REnl, agreed on every vertex and edge midpoint.
    let mut body_ok = true;
    let two = crate::rat::rint(2);
    let mut samples: Vec<Coord> = d.vertices().map(|(_, _, c)| c.clone()).collect();
    for &(u, v) in d.covers() {
        let (cu, cv) = (d.coord(u), d.coord(v));
        samples.push(Coord::new((&cu.p + &cv.p) / &two, (&cu.q + &cv.q) / &two));
    }
    let rect = d.full_rect();
    for lamp in &all {
        let g = lamp.geom(d);
        let corners = lamp.body_corners(d);
        for z in &samples {
            let in_sides = g.pt_in_lenl(&rect, z, false) && g.pt_in_renl(&rect, z, false);
            let in_body = if corners.len() == 2 {
                crate::diagram::point_on_open_segment(z, &corners[0], &corners[1])
                    || z == &corners[0]
                    || z == &corners[1]
            } else {
                let quad = [
                    corners[0].clone(),
                    corners[1].clone(),
                    corners[2].clone(),
                    corners[3].clone(),
                ];
                geometry::quad_contains(&quad, z, false)
            };
            if in_sides != in_body {
                body_ok = false;
            }
        }
    }
    report.record("body-is-lenl-meet-renl", body_ok, None);

    // Every vertex of Enl I lies in a peak 4-cell of I or in a rectangular
    // interval contained in Enl I (the geometric partition of Enl).
    if d.n() <= 120 {
        let cells = structure::four_cells(d);
        let mut partition_ok = true;
        for lamp in all.iter().filter(|l| l.is_internal()) {
            let g = lamp.geom(d);
            let peak_quads: Vec<[Coord; 4]> = cells
                .iter()
                .filter(|c| c.peak == lamp.peak)
                .map(|c| c.quad(d))
                .collect();
            let enl_rects: Vec<(Coord, Coord)> = rects
                .iter()
                .filter(|&&(a, b)| {
                    geometry::pt_in_enl(&g.foot, &g.peak, &rect, d.coord(a), false)
                        && geometry::pt_in_enl(&g.foot, &g.peak, &rect, d.coord(b), false)
                })
                .map(|&(a, b)| (d.coord(a).clone(), d.coord(b).clone()))
                .collect();
            for (_, _, z) in d.vertices() {
                if !geometry::pt_in_enl(&g.foot, &g.peak, &rect, z, false) {
                    continue;
                }
                let covered = peak_quads.iter().any(|q| geometry::quad_contains(q, z, false))
                    || enl_rects
                        .iter()
                        .any(|(lo, hi)| geometry::pt_in_box(lo, hi, z, false));
                if !covered {
                    partition_ok = false;
                }
            }
        }
        report.record("enl-geometric-partition", partition_ok, None);
    }

    // Tube segments inside rectangular intervals or illuminated sets drag the
    // whole body with them.
    let mut body_in_rect = true;
    for &(a, b) in &rects {
        let lo = d.coord(a);
        let hi = d.coord(b);
        for lamp in all.iter().filter(|l| l.is_internal()) {
            let any_tube = lamp
                .tubes
                .iter()
                .any(|&(u, v)| geometry::seg_in_box(lo, hi, d.coord(u), d.coord(v)));
            if any_tube {
                let body = lamp.body_corners(d);
                if !body.iter().all(|c| geometry::pt_in_box(lo, hi, c, false)) {
                    body_in_rect = false;
                }
            }
        }
    }
    report.record("tube-in-rectangle-pulls-body", body_in_rect, None);

    let mut enl_pull = true;
    for (i, li) in all.iter().enumerate() {
        let gi = li.geom(d);
        for (j, lj) in all.iter().enumerate() {
            if i == j || !lj.is_internal() {
                continue;
            }
            let any_tube = lj
                .tubes
                .iter()
                .any(|&(u, v)| geometry::seg_in_enl(&gi.foot, &gi.peak, d.coord(u), d.coord(v), false));
            if any_tube && !poset.lt(j, i) {
                enl_pull = false;
            }
        }
    }
    report.record("tube-in-enl-implies-below", enl_pull, None);

    if let Some(state) = state {
        match crate::constructions::used_neon_tubes(state) {
            Ok(usage) => {
                // no internal lamp uses three different tubes of one lamp
                let mut per_pair: std::collections::BTreeMap<(String, String), usize> =
                    std::collections::BTreeMap::new();
                for (user, tube_foot) in &usage.uses {
                    let owner = all
                        .iter()
                        .find(|l| l.tubes.iter().any(|&(u, _)| d.label(u) == tube_foot))
                        .map(|l| d.label(l.foot).to_string())
                        .unwrap_or_default();
                    *per_pair.entry((user.clone(), owner)).or_insert(0) += 1;
                }
                report.record(
                    "no-lamp-uses-three-tubes-of-one-lamp",
                    per_pair.values().all(|&c| c <= 2),
                    None,
                );
                // hence any lamp has at most 2 |Lamp L| used tubes
                let mut used_per_lamp_ok = true;
                for lamp in &all {
                    let used = lamp
                        .tubes
                        .iter()
                        .filter(|&&(u, _)| usage.used.get(d.label(u)) == Some(&true))
                        .count();
                    if used > 2 * all.len() {
                        used_per_lamp_ok = false;
                    }
                }
                report.record("used-tubes-bounded", used_per_lamp_ok, None);
            }
            Err(e) => report.record("used-neon-tubes", false, Some(e.to_string())),
        }

        // Birth bookkeeping: internal lamps correspond one to one to the
        // multifork/thrust steps, and a multifork-born lamp's circumscribed
        // rectangle is the geometric region of its birth cell.
        let internal_peaks: BTreeSet<String> = all
            .iter()
            .filter(|l| l.is_internal())
            .map(|l| d.label(l.peak).to_string())
            .collect();
        let birth_keys: BTreeSet<String> = state.birth.keys().cloned().collect();
        report.record("birth-maps-internal-lamps", internal_peaks == birth_keys, None);
        let mut circr_ok = true;
        for lamp in all.iter().filter(|l| l.is_internal()) {
            let Some(&step) = state.birth.get(d.label(lamp.peak)) else {
                continue;
            };
            let crate::constructions::Step::Multifork { cell_peak, .. } =
                &state.recipe.steps[step]
            else {
                continue;
            };
            // A later thrust moves a lamp's peak to its floor twin and the
            // circumscribed rectangle with it; the birth-cell identity is a
            // multifork-sequence fact, so only unrenamed lamps are checked.
            if d.label(lamp.peak) != cell_peak {
                continue;
            }
            let snap = &state.snapshots[step];
            let Ok(peak_s) = snap.idx(cell_peak) else {
                circr_ok = false;
                continue;
            };
            let Some(cell) = structure::find_cell(snap, peak_s) else {
                circr_ok = false;
                continue;
            };
            match lamps::lamp_regions(d, lamp) {
                Ok(regions) => {
                    let (base, peak) = regions.circ_r;
                    if d.coord(base) != snap.coord(cell.bottom)
                        || d.coord(peak) != snap.coord(cell.peak)
                    {
                        circr_ok = false;
                    }
                }
                Err(_) => circr_ok = false,
            }
        }
        report.record("circr-is-birth-cell", circr_ok, None);
    }
}

fn congruence_suite(d: &LatticeDiagram, report: &mut Report) {
    let all = lamps::lamps(d);
    let poset = lamps::lamp_poset(d, &all);
    let con = con_lattice(d);
    report.record("con-distributive", con.lattice.is_distributive(), None);
    match congruence::phi_iso(d, &all, &poset, &con) {
        Ok(_) => report.record("phi-lamp-jir-isomorphism", true, None),
        Err(e) => report.record("phi-lamp-jir-isomorphism", false, Some(e.to_string())),
    }

    // Minimal lamps: the rung partition is the principal congruence.
    let mut minimal_ok = true;
    for i in poset.minimal() {
        let lamp = &all[i];
        let rungs = lamps::rungs(d, lamp);
        let mut blocks: Vec<Vec<usize>> =
            rungs.iter().map(|&(lo, hi)| d.interval(lo, hi)).collect();
        blocks.push(d.interval(lamp.foot, lamp.peak));
        let rho = Partition::from_blocks(d.n(), &blocks);
        let oracle = principal_congruence(d, lamp.foot, lamp.peak);
        if rho != oracle {
            minimal_ok = false;
        }
    }
    report.record("minimal-lamp-rung-congruence", minimal_ok, None);

    // Swing criterion against the oracle on lattices of moderate size.
    if d.n() <= 100 {
        let trajs = lamps::trajectories(d);
        let index = SwingIndex::new(d, &all, &trajs);
        let mut ok = true;
        'outer: for lamp in &all {
            for &tube in &lamp.tubes {
                let cq = principal_congruence(d, tube.0, tube.1);
                let below = index.strictly_below(d, tube).expect("tube");
                for (ei, &(u, v)) in index.edges().iter().enumerate() {
                    let cp = principal_congruence(d, u, v);
                    let strict = cp.leq(&cq) && cp != cq;
                    if below[ei] != strict {
                        ok = false;
                        break 'outer;
                    }
                }
            }
        }
        report.record("swing-criterion-vs-oracle", ok, None);
    }
}

fn quotient_suite(d: &LatticeDiagram, report: &mut Report) {
    let con = con_lattice(d);
    let mut pass = true;
    let mut witness = None;
    for alpha in &con.elements {
        match quotient::quotient_diagram(d, alpha) {
            Ok(r) if r.verdict.is_pass() => {}
            Ok(r) => {
                pass = false;
                witness = Some(r.verdict.to_string());
                break;
            }
            Err(e) => {
                pass = false;
                witness = Some(e.to_string());
                break;
            }
        }
    }
    report.record("quotient-diagrams-all-c1", pass, witness);

    // Classification of quotients (semimodular/slim/SR-or-chain).
    let mut class_ok = true;
    for alpha in &con.elements {
        if !quotient::classify_quotient(d, alpha).unwrap_or(false) {
            class_ok = false;
        }
    }
    report.record("quotient-classification", class_ok, None);

    // Composition coherence along covering pairs of Con L.
    let mut comp_ok = true;
    let nc = con.elements.len();
    for ai in 0..nc {
        for &bi in &con.lattice.lower_covers(ai) {
            let alpha = &con.elements[ai];
            let beta = &con.elements[bi];
            let direct: BTreeSet<String> = match quotient::quotient_diagram(d, alpha) {
                Ok(r) => r.chosen.into_iter().collect(),
                Err(_) => {
                    comp_ok = false;
                    continue;
                }
            };
            let via: BTreeSet<String> = {
                let rb = quotient::quotient_diagram(d, beta).expect("congruence");
                let sub = rb.diagram.expect("beta quotient passes");
                // alpha restricted to the beta-representatives
                let mut blocks: Vec<Vec<usize>> = Vec::new();
                for block in alpha.blocks() {
                    let surviving: Vec<usize> = block
                        .iter()
                        .filter_map(|&x| sub.idx(d.label(x)).ok())
                        .collect();
                    if !surviving.is_empty() {
                        blocks.push(surviving);
                    }
                }
                let induced = Partition::from_blocks(sub.n(), &blocks);
                match quotient::quotient_diagram(&sub, &induced) {
                    Ok(r) => r.chosen.into_iter().collect(),
                    Err(_) => {
                        comp_ok = false;
                        continue;
                    }
                }
            };
            if direct != via {
                comp_ok = false;
            }
        }
    }
    report.record("quotient-composition-coherence", comp_ok, None);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{grid, replay, Recipe, Step};

    #[test]
    fn all_suites_pass_on_s2() {
        let recipe = Recipe::grid(1, 1).then(Step::Multifork {
            cell_peak: "g_1_1".into(),
            k: 2,
        });
        let state = replay(&recipe).unwrap();
        let r = run_suite(state.current(), Some(&state), "all").unwrap();
        assert!(r.pass(), "{r}");
    }

    #[test]
    fn all_suites_pass_on_grid33() {
        let d = grid(3, 3).unwrap();
        let r = run_suite(&d, None, "all").unwrap();
        assert!(r.pass(), "{r}");
    }
}
