//! Quotient lattices and quotient diagrams.
//!
//! The quotient diagram keeps the largest element of every congruence block
//! at its original position and connects covering pairs of the restricted
//! order. The validator checks that the result is a genuine Hasse diagram,
//! planar, order-isomorphic to the abstract quotient, and a C1 diagram.

use std::collections::BTreeMap;

use crate::congruence::{self, Partition};
use crate::diagram::{point_on_open_segment, Coord, LatticeDiagram};
use crate::error::{Error, Result};
use crate::structure;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    C1Pass,
    HasseFail(String),
    PlanarityFail(String),
    OrderFail(String),
    C1Fail(String),
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::C1Pass)
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::C1Pass => write!(f, "c1-pass"),
            Verdict::HasseFail(w) => write!(f, "hasse-fail: {w}"),
            Verdict::PlanarityFail(w) => write!(f, "planarity-fail: {w}"),
            Verdict::OrderFail(w) => write!(f, "order-fail: {w}"),
            Verdict::C1Fail(w) => write!(f, "c1-fail: {w}"),
        }
    }
}

/// Abstract quotient: block representatives with the induced order and the
/// structural classification of Observation-level facts (semimodularity and
/// slimness are preserved; an SR quotient is SR or a chain).
pub struct QuotientLattice {
    /// Largest element of each block, indexed by block id.
    pub block_max: Vec<usize>,
    /// Order among blocks: `leq[a * nblocks + b]`.
    pub leq: Vec<bool>,
}

pub fn quotient_lattice(d: &LatticeDiagram, alpha: &Partition) -> Result<QuotientLattice> {
    if !congruence::is_congruence(d, alpha) {
        return Err(Error::NotACongruence(
            "partition is not compatible with meet and join".into(),
        ));
    }
    let blocks = alpha.blocks();
    let nb = blocks.len();
    let mut block_max = Vec::with_capacity(nb);
    for block in &blocks {
        let mut m = block[0];
        for &x in &block[1..] {
            if d.leq(m, x) {
                m = x;
            } else if !d.leq(x, m) {
                // blocks of a lattice congruence are intervals, so a unique
                // maximum exists; reach it through the join
                m = d.join(m, x);
            }
        }
        debug_assert!(block.contains(&m));
        block_max.push(m);
    }
    let mut leq = vec![false; nb * nb];
    for a in 0..nb {
        for b in 0..nb {
            leq[a * nb + b] = d.leq(block_max[a], block_max[b]);
        }
    }
    Ok(QuotientLattice { block_max, leq })
}

pub struct QuotientResult {
    pub diagram: Option<LatticeDiagram>,
    /// Chosen representative (block maximum) labels, sorted.
    pub chosen: Vec<String>,
    pub verdict: Verdict,
}

/// The quotient diagram `F/α` with full validation.
pub fn quotient_diagram(d: &LatticeDiagram, alpha: &Partition) -> Result<QuotientResult> {
    let ql = quotient_lattice(d, alpha)?;
    let mut chosen: Vec<usize> = ql.block_max.clone();
    chosen.sort();
    let chosen_labels: Vec<String> = chosen.iter().map(|&v| d.label(v).to_string()).collect();
    let mut chosen_mask = crate::diagram::Bits::new(d.n());
    for &v in &chosen {
        chosen_mask.set(v);
    }

    // Covers of the restricted order: `u ≺ v` when exactly `u` and `v`
    // survive in the interval between them.
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for &u in &chosen {
        for &v in &chosen {
            if u != v && d.lt(u, v) {
                let between = d.up_set(u).and(d.down_set(v)).and(&chosen_mask);
                if between.count() == 2 {
                    edges.push((u, v));
                }
            }
        }
    }

    // (i) Hasse: no drawn edge through another chosen vertex.
    for &(u, v) in &edges {
        for &w in &chosen {
            if w != u && w != v && point_on_open_segment(d.coord(w), d.coord(u), d.coord(v)) {
                return Ok(QuotientResult {
                    diagram: None,
                    chosen: chosen_labels,
                    verdict: Verdict::HasseFail(format!(
                        "edge [{}, {}] passes through {}",
                        d.label(u),
                        d.label(v),
                        d.label(w)
                    )),
                });
            }
        }
    }

    // (ii) Planarity and lattice structure via a full rebuild.
    let verts: Vec<(String, Coord)> = chosen
        .iter()
        .map(|&v| (d.label(v).to_string(), d.coord(v).clone()))
        .collect();
    let cover_labels: Vec<(String, String)> = edges
        .iter()
        .map(|&(u, v)| (d.label(u).to_string(), d.label(v).to_string()))
        .collect();
    let sub = match LatticeDiagram::build(verts, &cover_labels) {
        Ok(s) => s,
        Err(Error::NotPlanar(w)) => {
            return Ok(QuotientResult {
                diagram: None,
                chosen: chosen_labels,
                verdict: Verdict::PlanarityFail(w),
            })
        }
        Err(Error::DownwardEdge(a, b)) => {
            return Ok(QuotientResult {
                diagram: None,
                chosen: chosen_labels,
                verdict: Verdict::PlanarityFail(format!("slight edge [{a}, {b}]")),
            })
        }
        Err(e) => {
            return Ok(QuotientResult {
                diagram: None,
                chosen: chosen_labels,
                verdict: Verdict::HasseFail(e.to_string()),
            })
        }
    };

    // (iii) Induced order isomorphic to the abstract quotient via block max.
    let nb = ql.block_max.len();
    let mut ok = true;
    let mut witness = String::new();
    let mut sub_idx: BTreeMap<usize, usize> = BTreeMap::new();
    for (bi, &m) in ql.block_max.iter().enumerate() {
        sub_idx.insert(bi, sub.idx(d.label(m)).expect("representative present"));
    }
    'outer: for a in 0..nb {
        for b in 0..nb {
            let abstract_le = ql.leq[a * nb + b];
            let drawn_le = sub.leq(sub_idx[&a], sub_idx[&b]);
            if abstract_le != drawn_le {
                ok = false;
                witness = format!(
                    "blocks of {} and {}",
                    d.label(ql.block_max[a]),
                    d.label(ql.block_max[b])
                );
                break 'outer;
            }
        }
    }
    if !ok {
        return Ok(QuotientResult {
            diagram: Some(sub),
            chosen: chosen_labels,
            verdict: Verdict::OrderFail(witness),
        });
    }

    // (iv) C1 of the subdiagram.
    let c1 = structure::check_c1(&sub);
    if !c1.pass() {
        let w = c1
            .items
            .iter()
            .find(|i| !i.pass)
            .and_then(|i| i.witness.clone())
            .unwrap_or_default();
        return Ok(QuotientResult {
            diagram: Some(sub),
            chosen: chosen_labels,
            verdict: Verdict::C1Fail(w),
        });
    }
    Ok(QuotientResult {
        diagram: Some(sub),
        chosen: chosen_labels,
        verdict: Verdict::C1Pass,
    })
}

/// Observation-level classification of a quotient: semimodular and slim
/// whenever the input is; SR or a chain whenever the input is SR.
pub fn classify_quotient(d: &LatticeDiagram, alpha: &Partition) -> Result<bool> {
    let res = quotient_diagram(d, alpha)?;
    let sub = match res.diagram {
        Some(s) => s,
        None => return Ok(false),
    };
    if structure::is_sr(d) {
        Ok(sub.is_chain() || structure::is_sr(&sub))
    } else {
        Ok(true)
    }
}
