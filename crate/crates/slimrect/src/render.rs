//! Deterministic SVG rendering. Drawing coordinates are `x = p - q` and
//! `y = p + q` (flipped for the SVG y-axis); neon tubes are drawn thick and
//! lamp feet are filled, following the usual figure conventions.

use num::Signed;

use crate::diagram::LatticeDiagram;
use crate::lamps;
use crate::rat::{rint, Rat};

const SCALE: i64 = 48;
const MARGIN: i64 = 24;
const RADIUS: &str = "4";

/// Fixed-point decimal with three digits, computed exactly.
fn dec(r: &Rat) -> String {
    let scaled = r * rint(1000);
    let rounded = scaled.round();
    let units = rounded.numer() / rounded.denom();
    let neg = units.is_negative();
    let abs = if neg { -units.clone() } else { units.clone() };
    let int = &abs / 1000;
    let frac = &abs % 1000;
    let sign = if neg { "-" } else { "" };
    if frac == 0.into() {
        format!("{sign}{int}")
    } else {
        let s = format!("{frac:03}");
        let trimmed = s.trim_end_matches('0');
        format!("{sign}{int}.{trimmed}")
    }
}

pub fn render_svg(d: &LatticeDiagram) -> String {
    let xs: Vec<Rat> = d.vertices().map(|(_, _, c)| c.x()).collect();
    let ys: Vec<Rat> = d.vertices().map(|(_, _, c)| c.height()).collect();
    let xmin = xs.iter().min().unwrap().clone();
    let xmax = xs.iter().max().unwrap().clone();
    let ymax = ys.iter().max().unwrap().clone();
    let sx = |x: &Rat| dec(&((x - &xmin) * rint(SCALE) + rint(MARGIN)));
    let sy = |y: &Rat| dec(&((&ymax - y) * rint(SCALE) + rint(MARGIN)));
    let width = dec(&((&xmax - &xmin) * rint(SCALE) + rint(2 * MARGIN)));
    let height = dec(&(&ymax * rint(SCALE) + rint(2 * MARGIN)));

    let all_lamps = lamps::lamps(d);
    let tube_set: std::collections::BTreeSet<(usize, usize)> = all_lamps
        .iter()
        .flat_map(|l| l.tubes.iter().copied())
        .collect();
    let foot_set: std::collections::BTreeSet<usize> =
        all_lamps.iter().map(|l| l.foot).collect();

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\">\n"
    ));
    out.push_str("  <g stroke=\"black\" fill=\"none\">\n");
    for &(u, v) in d.covers() {
        let (cu, cv) = (d.coord(u), d.coord(v));
        let w = if tube_set.contains(&(u, v)) { "3.5" } else { "1.2" };
        out.push_str(&format!(
            "    <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke-width=\"{w}\"/>\n",
            sx(&cu.x()),
            sy(&cu.height()),
            sx(&cv.x()),
            sy(&cv.height())
        ));
    }
    out.push_str("  </g>\n");
    for (v, label, c) in d.vertices() {
        let fill = if foot_set.contains(&v) { "black" } else { "white" };
        out.push_str(&format!(
            "  <circle cx=\"{}\" cy=\"{}\" r=\"{RADIUS}\" fill=\"{fill}\" stroke=\"black\"/>\n",
            sx(&c.x()),
            sy(&c.height())
        ));
        out.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" font-size=\"9\" fill=\"gray\">{}</text>\n",
            sx(&(&c.x() + crate::rat::rat(1, 6))),
            sy(&(&c.height() + crate::rat::rat(1, 6))),
            label
        ));
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{grid, insert_multifork};

    #[test]
    fn deterministic_output() {
        let d = grid(1, 1).unwrap();
        assert_eq!(render_svg(&d), render_svg(&d));
        let s = render_svg(&d);
        assert_eq!(s.matches("<circle").count(), 4);
        assert_eq!(s.matches("<line").count(), 4);
    }

    #[test]
    fn tube_drawn_thick() {
        let s1 = insert_multifork(&grid(1, 1).unwrap(), "g_1_1", 1, 0).unwrap();
        let svg = render_svg(&s1);
        assert!(svg.contains("stroke-width=\"3.5\""));
    }

    #[test]
    fn exact_decimals() {
        assert_eq!(dec(&crate::rat::rat(1, 2)), "0.5");
        assert_eq!(dec(&crate::rat::rat(-3, 4)), "-0.75");
        assert_eq!(dec(&crate::rat::rint(7)), "7");
    }
}
