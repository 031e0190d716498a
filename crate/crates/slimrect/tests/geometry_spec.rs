//! Geometry-facing behaviour on the small standard lattices.

use slimrect::constructions::{grid, insert_multifork, replay, Recipe, Step};
use slimrect::diagram::Coord;
use slimrect::error::Error;
use slimrect::geometry::{illuminated, roof_floor};
use slimrect::lamps;
use slimrect::rat::rint;
use slimrect::realize;

#[test]
fn bounds_on_s1() {
    let s1 = insert_multifork(&grid(1, 1).unwrap(), "g_1_1", 1, 0).unwrap();
    // tube foot meets the left corner on the left ray's endpoint; their join
    // is the top
    let (meet, join) = s1.bounds("s0_f1", "g_0_1").unwrap();
    let m = s1.idx(&meet).unwrap();
    let f = s1.idx("s0_f1").unwrap();
    assert_eq!(s1.coord(m).p, rint(0));
    assert_eq!(s1.coord(m).q, s1.coord(f).q);
    assert_eq!(join, "g_1_1");
}

#[test]
fn roof_floor_of_whole_square() {
    let d = grid(1, 1).unwrap();
    let (roof, floor) = roof_floor(&d, d.bottom(), d.top()).unwrap();
    assert_eq!(
        roof,
        vec![
            Coord::new(rint(0), rint(1)),
            Coord::new(rint(1), rint(1)),
            Coord::new(rint(1), rint(0)),
        ]
    );
    assert_eq!(floor, vec![Coord::new(rint(0), rint(0))]);
    // singleton interval: roof equals floor
    let x = d.idx("g_1_0").unwrap();
    let (r, f) = roof_floor(&d, x, x).unwrap();
    assert_eq!(r, f);
    // incomparable pair is rejected
    let y = d.idx("g_0_1").unwrap();
    assert!(matches!(
        roof_floor(&d, x, y),
        Err(Error::NotComparable(_, _))
    ));
}

#[test]
fn illuminated_whole_lattice_is_everything() {
    let d = grid(2, 2).unwrap();
    let t = illuminated(&d, d.bottom(), d.top()).unwrap();
    for (_, _, c) in d.vertices() {
        assert!(t.contains_point(c, false));
    }
}

#[test]
fn original_territory_requires_history() {
    let state = replay(&Recipe::grid(2, 2)).unwrap();
    // a boundary tube of the grid: territory spans its trajectory band
    let (ot, lhot) = slimrect::constructions::original_territory(&state, "g_0_2").unwrap();
    let d = state.current();
    // the trajectory of [g_0_2, g_1_2] runs through the whole top row band
    assert!(ot.contains_point(&Coord::new(rint(0), rint(1)), false));
    // the cell next to the tube's peak is excluded from the lower half
    assert!(ot.contains_segment(
        &Coord::new(rint(0), rint(1)),
        &Coord::new(rint(1), rint(2))
    ));
    let _ = lhot;
    assert!(d.idx("g_0_2").is_ok());
    // a non-tube vertex is rejected
    assert!(matches!(
        slimrect::constructions::original_territory(&state, "g_0_0"),
        Err(Error::NotANeonTube(_, _))
    ));
}

#[test]
fn stacked_fork_under_s2_tube_is_below_the_lamp() {
    // Fork into the cell under the first tube foot of S2: the younger lamp
    // lies strictly below the older one in the lamp poset.
    let state = replay(
        &Recipe::grid(1, 1)
            .then(Step::Multifork {
                cell_peak: "g_1_1".into(),
                k: 2,
            })
            .then(Step::Multifork {
                cell_peak: "s0_f1".into(),
                k: 1,
            }),
    )
    .unwrap();
    let d = state.current();
    let ls = lamps::lamps(d);
    let poset = lamps::lamp_poset(d, &ls);
    let older = ls
        .iter()
        .position(|l| l.is_internal() && d.label(l.peak) == "g_1_1")
        .unwrap();
    let younger = ls
        .iter()
        .position(|l| l.is_internal() && d.label(l.peak) == "s0_f1")
        .unwrap();
    assert!(poset.lt(younger, older));
    let rel = lamps::lamp_relations(d, &ls);
    assert!(rel.equal);
    assert!(rel.rho_foot.contains(&(younger, older)));
}

#[test]
fn side_by_side_piles_are_incomparable() {
    // Forks under two different tube feet of S2 give incomparable new lamps:
    // a younger lamp standing on an older foot is in nobody's light there.
    let state = replay(
        &Recipe::grid(1, 1)
            .then(Step::Multifork {
                cell_peak: "g_1_1".into(),
                k: 1,
            })
            .then(Step::Multifork {
                cell_peak: "s0_f1".into(),
                k: 1,
            }),
    )
    .unwrap();
    let d = state.current();
    let ls = lamps::lamps(d);
    let poset = lamps::lamp_poset(d, &ls);
    let older = ls
        .iter()
        .position(|l| l.is_internal() && d.label(l.peak) == "g_1_1")
        .unwrap();
    let younger = ls
        .iter()
        .position(|l| l.is_internal() && d.label(l.peak) == "s0_f1")
        .unwrap();
    assert!(!poset.leq(younger, older) && !poset.leq(older, younger));
    // quotients by either lamp's congruence restore an SR lattice; the full
    // round trip for the younger one restores the S1 stage exactly
    let alpha = slimrect::congruence::principal_congruence(
        d,
        ls[younger].foot,
        ls[younger].peak,
    );
    let q = slimrect::quotient::quotient_diagram(d, &alpha).unwrap();
    assert!(q.verdict.is_pass());
    assert!(realize::diagram_equal(
        &q.diagram.unwrap(),
        &state.snapshots[1]
    ));
}
