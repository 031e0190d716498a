//! Abstract finite lattices and the filter dualities of finite distributive
//! lattices.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::poset::Poset;
use crate::report::Report;

/// A finite lattice given by its order matrix; meets and joins are tabulated
/// on construction.
#[derive(Clone, Debug)]
pub struct FiniteLattice {
    n: usize,
    leq: Vec<bool>,
    meet: Vec<u32>,
    join: Vec<u32>,
    bottom: usize,
    top: usize,
}

impl FiniteLattice {
    pub fn from_leq(n: usize, leq: Vec<bool>) -> Result<Self> {
        assert_eq!(leq.len(), n * n);
        let le = |a: usize, b: usize| leq[a * n + b];
        let mut meet = vec![0u32; n * n];
        let mut join = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                let lower: Vec<usize> = (0..n).filter(|&x| le(x, a) && le(x, b)).collect();
                let m = lower
                    .iter()
                    .copied()
                    .find(|&m| lower.iter().all(|&x| le(x, m)))
                    .ok_or_else(|| Error::NotALattice(format!("{a} and {b} have no meet")))?;
                meet[a * n + b] = m as u32;
                let upper: Vec<usize> = (0..n).filter(|&x| le(a, x) && le(b, x)).collect();
                let j = upper
                    .iter()
                    .copied()
                    .find(|&j| upper.iter().all(|&x| le(j, x)))
                    .ok_or_else(|| Error::NotALattice(format!("{a} and {b} have no join")))?;
                join[a * n + b] = j as u32;
            }
        }
        let bottom = (0..n)
            .find(|&b| (0..n).all(|x| le(b, x)))
            .ok_or_else(|| Error::NotALattice("no bottom".into()))?;
        let top = (0..n)
            .find(|&t| (0..n).all(|x| le(x, t)))
            .ok_or_else(|| Error::NotALattice("no top".into()))?;
        Ok(FiniteLattice {
            n,
            leq,
            meet,
            join,
            bottom,
            top,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.n + b]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.n + b] as usize
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.n + b] as usize
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn lower_covers(&self, x: usize) -> Vec<usize> {
        (0..self.n)
            .filter(|&y| {
                self.lt(y, x) && (0..self.n).all(|z| !(self.lt(y, z) && self.lt(z, x)))
            })
            .collect()
    }

    pub fn upper_covers(&self, x: usize) -> Vec<usize> {
        (0..self.n)
            .filter(|&y| {
                self.lt(x, y) && (0..self.n).all(|z| !(self.lt(x, z) && self.lt(z, y)))
            })
            .collect()
    }

    /// Nonzero elements with exactly one lower cover.
    pub fn jir(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&x| x != self.bottom && self.lower_covers(x).len() == 1)
            .collect()
    }

    pub fn is_distributive(&self) -> bool {
        for a in 0..self.n {
            for b in 0..self.n {
                for c in 0..self.n {
                    if self.meet(a, self.join(b, c))
                        != self.join(self.meet(a, b), self.meet(a, c))
                    {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn jir_poset(&self) -> Poset {
        let jir = self.jir();
        let labels: Vec<String> = jir.iter().map(|&i| format!("j{i}")).collect();
        let mut pairs = Vec::new();
        for (a, &ia) in jir.iter().enumerate() {
            for (b, &ib) in jir.iter().enumerate() {
                if a != b && self.leq(ia, ib) {
                    pairs.push((a, b));
                }
            }
        }
        Poset::new(labels, &pairs).expect("restriction of a lattice order")
    }
}

/// Outcome of the Birkhoff-style filter duality checks on a finite
/// distributive lattice `D`: with `Jir D` its join-irreducibles,
/// `ψ(filter(u)) = {p ∈ Jir D : p ≰ u}` and
/// `γ(Y) = filter(⋁(Jir D \ Y))` are reciprocal order isomorphisms between
/// the lattice filters of `D` and the order filters of `Jir D`, and each
/// filter `X` satisfies `Jir X ≅ ψ(X)` via `p ↦ u ∨ p`.
pub fn filter_duality(d: &FiniteLattice) -> Result<Report> {
    if !d.is_distributive() {
        return Err(Error::NotDistributiveLattice(
            "filter duality requires distributivity".into(),
        ));
    }
    let mut report = Report::new("filter-duality");
    let jir = d.jir();
    let psi = |u: usize| -> BTreeSet<usize> {
        jir.iter().copied().filter(|&p| !d.leq(p, u)).collect()
    };
    let gamma = |y: &BTreeSet<usize>| -> usize {
        let mut acc = d.bottom();
        for &p in &jir {
            if !y.contains(&p) {
                acc = d.join(acc, p);
            }
        }
        acc
    };

    // Lattice filters correspond to their least elements u.
    let mut psi_images = BTreeSet::new();
    let mut bijective = true;
    for u in 0..d.n() {
        let y = psi(u);
        // γ(ψ(filter u)) must be filter(u) again.
        if gamma(&y) != u {
            bijective = false;
        }
        psi_images.insert(y);
    }
    report.record("gamma-after-psi-identity", bijective, None);
    report.record(
        "psi-injective",
        psi_images.len() == d.n(),
        Some(format!("{} images for {} filters", psi_images.len(), d.n())),
    );

    // ψ images are exactly the order filters of Jir D.
    let jir_poset = d.jir_poset();
    let ofilt = jir_poset.order_filters();
    let ofilt_as_sets: BTreeSet<BTreeSet<usize>> = ofilt
        .iter()
        .map(|s| s.iter().map(|&i| jir[i]).collect())
        .collect();
    report.record(
        "psi-onto-order-filters",
        psi_images == ofilt_as_sets,
        Some(format!(
            "{} images vs {} order filters",
            psi_images.len(),
            ofilt_as_sets.len()
        )),
    );

    // ψ after γ is the identity on order filters.
    let psi_gamma_id = ofilt_as_sets.iter().all(|y| &psi(gamma(y)) == y);
    report.record("psi-after-gamma-identity", psi_gamma_id, None);

    // Order-preservation in both directions. Filters are ordered by
    // inclusion, i.e. filter(u) ⊆ filter(v) iff v ⩽ u.
    let mut order_ok = true;
    for u in 0..d.n() {
        for v in 0..d.n() {
            let filt_incl = d.leq(v, u);
            let psi_incl = psi(u).is_subset(&psi(v));
            if filt_incl != psi_incl {
                order_ok = false;
            }
        }
    }
    report.record("psi-order-isomorphism", order_ok, None);

    // Jir X ≅ ψ(X) via μ(p) = u ∨ p, exactly.
    let mut mu_ok = true;
    for u in 0..d.n() {
        let filter: Vec<usize> = (0..d.n()).filter(|&x| d.leq(u, x)).collect();
        // join-irreducibles of the filter as a lattice of its own
        let jir_x: BTreeSet<usize> = filter
            .iter()
            .copied()
            .filter(|&x| {
                x != u
                    && filter
                        .iter()
                        .copied()
                        .filter(|&y| {
                            d.lt(y, x)
                                && filter
                                    .iter()
                                    .all(|&z| !(d.lt(y, z) && d.lt(z, x)))
                        })
                        .count()
                        == 1
            })
            .collect();
        let y = psi(u);
        let image: BTreeSet<usize> = y.iter().map(|&p| d.join(u, p)).collect();
        if image != jir_x || image.len() != y.len() {
            mu_ok = false;
            continue;
        }
        for &p in &y {
            for &r in &y {
                if d.leq(p, r) != d.leq(d.join(u, p), d.join(u, r)) {
                    mu_ok = false;
                }
            }
        }
    }
    report.record("mu-maps-psi-to-jir-of-filter", mu_ok, None);
    Ok(report)
}
