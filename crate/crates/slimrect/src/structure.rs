//! Structural validators: C1 diagrams, slim rectangularity, 4-cells and
//! boundary chains.

use crate::diagram::{Coord, LatticeDiagram, SlopeClass};
use crate::error::{Error, Result};
use crate::geometry;
use crate::report::Report;

/// C1 condition: an edge whose foot is an internal meet-irreducible element
/// must be precipitous; every other edge must have a normal slope. A chain
/// diagram passes iff all its edges are normal.
pub fn check_c1(d: &LatticeDiagram) -> Report {
    let mut report = Report::new("c1");
    if d.is_chain() {
        let bad: Vec<String> = d
            .covers()
            .iter()
            .filter(|&&(u, v)| !d.classify(u, v).is_normal())
            .map(|&(u, v)| format!("[{}, {}]", d.label(u), d.label(v)))
            .collect();
        report.record(
            "chain-all-normal",
            bad.is_empty(),
            (!bad.is_empty()).then(|| bad.join(", ")),
        );
        return report;
    }
    let irr = d.irreducibles();
    let mut bad = Vec::new();
    for &(u, v) in d.covers() {
        let internal_mir = irr.mir.contains(&u) && !d.on_boundary(u);
        let slope = d.classify(u, v);
        let ok = if internal_mir {
            slope == SlopeClass::Precipitous
        } else {
            slope.is_normal()
        };
        if !ok {
            bad.push(format!("[{}, {}]", d.label(u), d.label(v)));
        }
    }
    report.record(
        "edge-slopes",
        bad.is_empty(),
        (!bad.is_empty()).then(|| bad.join(", ")),
    );
    report
}

/// Semimodularity by exhaustive check of `a∧b ≺ a  ⟹  b ≺ a∨b`.
pub fn is_semimodular(d: &LatticeDiagram) -> Option<(usize, usize)> {
    for a in 0..d.n() {
        for b in 0..d.n() {
            let m = d.meet(a, b);
            if d.is_edge(m, a) && !d.is_edge(b, d.join(a, b)) {
                return Some((a, b));
            }
        }
    }
    None
}

/// Join-irreducibles split into exactly two chains, each element of one
/// incomparable with all of the other. Returns the two chains.
pub fn slim_two_chains(d: &LatticeDiagram) -> Option<(Vec<usize>, Vec<usize>)> {
    let jir = d.irreducibles().jir;
    if jir.is_empty() {
        return None;
    }
    // Components of the comparability graph restricted to Jir.
    let mut comp = vec![usize::MAX; jir.len()];
    let mut ncomp = 0;
    for i in 0..jir.len() {
        if comp[i] != usize::MAX {
            continue;
        }
        let mut stack = vec![i];
        comp[i] = ncomp;
        while let Some(x) = stack.pop() {
            for y in 0..jir.len() {
                if comp[y] == usize::MAX
                    && (d.leq(jir[x], jir[y]) || d.leq(jir[y], jir[x]))
                {
                    comp[y] = ncomp;
                    stack.push(y);
                }
            }
        }
        ncomp += 1;
    }
    if ncomp != 2 {
        return None;
    }
    let mut chains = vec![Vec::new(), Vec::new()];
    for (i, &v) in jir.iter().enumerate() {
        chains[comp[i]].push(v);
    }
    for chain in &chains {
        for (i, &a) in chain.iter().enumerate() {
            for &b in &chain[i + 1..] {
                if !d.leq(a, b) && !d.leq(b, a) {
                    return None;
                }
            }
        }
    }
    let mut it = chains.into_iter();
    Some((it.next().unwrap(), it.next().unwrap()))
}

fn find_cover_preserving_m3(d: &LatticeDiagram) -> Option<(usize, usize, usize, usize, usize)> {
    for b in 0..d.n() {
        let ups = d.up_covers(b);
        if ups.len() < 3 {
            continue;
        }
        for i in 0..ups.len() {
            for j in i + 1..ups.len() {
                for k in j + 1..ups.len() {
                    let (x, y, z) = (ups[i], ups[j], ups[k]);
                    let t = d.join(x, y);
                    if d.join(x, z) == t
                        && d.join(y, z) == t
                        && d.is_edge(x, t)
                        && d.is_edge(y, t)
                        && d.is_edge(z, t)
                    {
                        return Some((b, x, y, z, t));
                    }
                }
            }
        }
    }
    None
}

/// Slim rectangularity: semimodular, Jir a union of two fully incomparable
/// chains, the 4-cell criterion (4-cell lattice, distinct cell bottoms,
/// exactly two doubly irreducible elements which are complementary), and no
/// cover-preserving M3.
pub fn check_sr(d: &LatticeDiagram) -> Report {
    let mut report = Report::new("sr");
    let semi = is_semimodular(d);
    report.record(
        "semimodular",
        semi.is_none(),
        semi.map(|(a, b)| format!("{}, {}", d.label(a), d.label(b))),
    );

    let chains = slim_two_chains(d);
    report.record("jir-two-incomparable-chains", chains.is_some(), None);

    // 4-cell lattice with distinct cell bottoms: every element has at most
    // two upper covers and each consecutive cover pair closes into a cell.
    let mut cell_ok = true;
    let mut witness = None;
    for b in 0..d.n() {
        let ups = d.up_covers(b);
        if ups.len() > 2 {
            cell_ok = false;
            witness = Some(format!("{} has {} covers", d.label(b), ups.len()));
            break;
        }
        if ups.len() == 2 {
            let t = d.join(ups[0], ups[1]);
            if !d.is_edge(ups[0], t) || !d.is_edge(ups[1], t) {
                cell_ok = false;
                witness = Some(format!("covers of {} do not close a 4-cell", d.label(b)));
                break;
            }
        }
    }
    report.record("four-cell-lattice", cell_ok, witness);

    let irr = d.irreducibles();
    let two = irr.doubly.len() == 2;
    report.record(
        "two-doubly-irreducible",
        two,
        (!two).then(|| format!("{} doubly irreducible elements", irr.doubly.len())),
    );
    if two {
        let (x, y) = (irr.doubly[0], irr.doubly[1]);
        let comp = d.meet(x, y) == d.bottom() && d.join(x, y) == d.top();
        report.record("doubly-irreducible-complementary", comp, None);
    }

    let m3 = find_cover_preserving_m3(d);
    report.record(
        "no-cover-preserving-m3",
        m3.is_none(),
        m3.map(|(b, ..)| d.label(b).to_string()),
    );
    report
}

pub fn is_sr(d: &LatticeDiagram) -> bool {
    check_sr(d).pass()
}

#[derive(Clone, Debug)]
pub struct FourCell {
    pub bottom: usize,
    pub left: usize,
    pub right: usize,
    pub peak: usize,
    pub rectangular: bool,
    pub distributive: bool,
    pub enl_distributive: bool,
}

impl FourCell {
    /// Corners counter-clockwise in merge coordinates.
    pub fn quad(&self, d: &LatticeDiagram) -> [Coord; 4] {
        [
            d.coord(self.bottom).clone(),
            d.coord(self.right).clone(),
            d.coord(self.peak).clone(),
            d.coord(self.left).clone(),
        ]
    }
}

/// All 4-cells with their rectangular / distributive / Enl-distributive
/// flags. Distributivity is the geometric test: no precipitous edge segment
/// under the cell's roof; the Enl variant confines the test to the cell's
/// illuminated set.
pub fn four_cells(d: &LatticeDiagram) -> Vec<FourCell> {
    let precipitous: Vec<(usize, usize)> = d
        .covers()
        .iter()
        .copied()
        .filter(|&(u, v)| d.classify(u, v) == SlopeClass::Precipitous)
        .collect();
    let mut cells = Vec::new();
    for b in 0..d.n() {
        let ups = d.up_covers(b);
        if ups.len() != 2 {
            continue;
        }
        let (l, r) = (ups[0], ups[1]);
        let t = d.join(l, r);
        debug_assert!(d.is_edge(l, t) && d.is_edge(r, t));
        let ct = d.coord(t);
        let rectangular = d.coord(l).q == ct.q && d.coord(r).p == ct.p;
        let distributive = !precipitous
            .iter()
            .any(|&(u, _)| d.coord(u).p < ct.p && d.coord(u).q < ct.q);
        let cb = d.coord(b);
        let enl_distributive = !precipitous
            .iter()
            .any(|&(u, v)| geometry::seg_in_enl(cb, ct, d.coord(u), d.coord(v), false));
        cells.push(FourCell {
            bottom: b,
            left: l,
            right: r,
            peak: t,
            rectangular,
            distributive,
            enl_distributive,
        });
    }
    cells
}

pub fn find_cell(d: &LatticeDiagram, peak: usize) -> Option<FourCell> {
    four_cells(d).into_iter().find(|c| c.peak == peak)
}

#[derive(Clone, Debug)]
pub struct Boundary {
    /// Left boundary chain, bottom to top.
    pub lbnd: Vec<usize>,
    /// Right boundary chain, bottom to top.
    pub rbnd: Vec<usize>,
    pub lcorner: usize,
    pub rcorner: usize,
    /// `lsupp[x] = x ∧ lcorner`, always on the left boundary.
    pub lsupp: Vec<usize>,
    /// `rsupp[x] = x ∧ rcorner`, always on the right boundary.
    pub rsupp: Vec<usize>,
}

/// Boundary chains, corners and support maps of an SR diagram, with the
/// geometric agreement checks: `lsupp x` sits at `(pmin, q(x))` and the
/// interval up to `x` is a chain of constant `q`; symmetrically on the right.
pub fn boundary(d: &LatticeDiagram) -> Result<Boundary> {
    let (pmin, pmax, qmin, qmax) = d.full_rect();
    let lcorner = d
        .vertex_at(&Coord::new(pmin.clone(), qmax.clone()))
        .ok_or_else(|| Error::NotSr("no left corner vertex".into()))?;
    let rcorner = d
        .vertex_at(&Coord::new(pmax.clone(), qmin.clone()))
        .ok_or_else(|| Error::NotSr("no right corner vertex".into()))?;
    let mut lbnd: Vec<usize> = (0..d.n())
        .filter(|&v| d.coord(v).p == pmin || d.coord(v).q == qmax)
        .collect();
    lbnd.sort_by_key(|&a| d.coord(a).height());
    let mut rbnd: Vec<usize> = (0..d.n())
        .filter(|&v| d.coord(v).q == qmin || d.coord(v).p == pmax)
        .collect();
    rbnd.sort_by_key(|&a| d.coord(a).height());

    let mut lsupp = Vec::with_capacity(d.n());
    let mut rsupp = Vec::with_capacity(d.n());
    for x in 0..d.n() {
        let ls = d.meet(x, lcorner);
        let rs = d.meet(x, rcorner);
        let cx = d.coord(x);
        let expected_l = Coord::new(pmin.clone(), cx.q.clone());
        let expected_r = Coord::new(cx.p.clone(), qmin.clone());
        if *d.coord(ls) != expected_l {
            return Err(Error::NotSr(format!(
                "lsupp({}) is not the geometric projection",
                d.label(x)
            )));
        }
        if *d.coord(rs) != expected_r {
            return Err(Error::NotSr(format!(
                "rsupp({}) is not the geometric projection",
                d.label(x)
            )));
        }
        // [lsupp x, x] must be a chain of constant q, [rsupp x, x] of constant p.
        for z in d.interval(ls, x) {
            if d.coord(z).q != cx.q {
                return Err(Error::NotSr(format!(
                    "[lsupp {x}, {x}] leaves the constant-q ray",
                    x = d.label(x)
                )));
            }
        }
        for z in d.interval(rs, x) {
            if d.coord(z).p != cx.p {
                return Err(Error::NotSr(format!(
                    "[rsupp {x}, {x}] leaves the constant-p ray",
                    x = d.label(x)
                )));
            }
        }
        lsupp.push(ls);
        rsupp.push(rs);
    }
    Ok(Boundary {
        lbnd,
        rbnd,
        lcorner,
        rcorner,
        lsupp,
        rsupp,
    })
}
