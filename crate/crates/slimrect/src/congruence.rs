//! Congruences by brute force and by the lamp machinery.
//!
//! The principal-congruence fixpoint closure here is the oracle everything
//! else is checked against: lamp-based computations are never trusted without
//! an oracle comparison in the test suites.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::birkhoff::FiniteLattice;
use crate::diagram::LatticeDiagram;
use crate::error::{Error, Result};
use crate::lamps::{self, Lamp, Trajectory};
use crate::poset::Poset;

/// A partition of the vertex set in canonical form: block ids are assigned
/// by first occurrence, so equal partitions compare equal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    block_of: Vec<u32>,
}

impl Partition {
    pub fn identity(n: usize) -> Self {
        Partition {
            block_of: (0..n as u32).collect(),
        }
    }

    pub fn full(n: usize) -> Self {
        Partition {
            block_of: vec![0; n],
        }
    }

    fn normalize(mut raw: Vec<u32>) -> Self {
        let mut rename: BTreeMap<u32, u32> = BTreeMap::new();
        for b in raw.iter_mut() {
            let next = rename.len() as u32;
            let id = *rename.entry(*b).or_insert(next);
            *b = id;
        }
        Partition { block_of: raw }
    }

    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Self {
        let mut raw: Vec<u32> = (0..n as u32).map(|i| i + n as u32).collect();
        for (bi, block) in blocks.iter().enumerate() {
            for &x in block {
                raw[x] = bi as u32;
            }
        }
        Partition::normalize(raw)
    }

    pub fn n(&self) -> usize {
        self.block_of.len()
    }

    pub fn same(&self, a: usize, b: usize) -> bool {
        self.block_of[a] == self.block_of[b]
    }

    pub fn block_id(&self, a: usize) -> u32 {
        self.block_of[a]
    }

    pub fn nblocks(&self) -> usize {
        self.block_of.iter().map(|&b| b as usize + 1).max().unwrap_or(0)
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.nblocks()];
        for (x, &b) in self.block_of.iter().enumerate() {
            blocks[b as usize].push(x);
        }
        blocks
    }

    /// Refinement order: every block of `self` inside a block of `other`.
    pub fn leq(&self, other: &Partition) -> bool {
        let mut image: BTreeMap<u32, u32> = BTreeMap::new();
        for x in 0..self.n() {
            match image.get(&self.block_of[x]) {
                None => {
                    image.insert(self.block_of[x], other.block_of[x]);
                }
                Some(&b) => {
                    if b != other.block_of[x] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Join in the equivalence lattice (transitive closure of the union),
    /// which is also the join of two congruences.
    pub fn join(&self, other: &Partition) -> Partition {
        let n = self.n();
        let mut uf = UnionFind::new(n);
        for part in [self, other] {
            let mut prev: Vec<Option<usize>> = vec![None; n];
            for x in 0..n {
                let b = part.block_of[x] as usize;
                if let Some(p) = prev[b] {
                    uf.union(p, x);
                }
                prev[b] = Some(x);
            }
        }
        uf.into_partition()
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let r = self.find(self.parent[x]);
            self.parent[x] = r;
        }
        self.parent[x]
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            false
        } else {
            self.parent[ra.max(rb)] = ra.min(rb);
            true
        }
    }

    fn into_partition(mut self) -> Partition {
        let raw: Vec<u32> = (0..self.parent.len())
            .map(|x| self.find(x) as u32)
            .collect();
        Partition::normalize(raw)
    }
}

/// Least congruence merging every given pair: fixpoint closure under meets
/// and joins with all elements. This is the oracle.
pub fn con_generated(d: &LatticeDiagram, pairs: &[(usize, usize)]) -> Partition {
    let n = d.n();
    let mut uf = UnionFind::new(n);
    let mut work: VecDeque<(usize, usize)> = VecDeque::new();
    for &(a, b) in pairs {
        if uf.union(a, b) {
            work.push_back((a, b));
        }
    }
    while let Some((u, v)) = work.pop_front() {
        for c in 0..n {
            let (mu, mv) = (d.meet(u, c), d.meet(v, c));
            if uf.union(mu, mv) {
                work.push_back((mu, mv));
            }
            let (ju, jv) = (d.join(u, c), d.join(v, c));
            if uf.union(ju, jv) {
                work.push_back((ju, jv));
            }
        }
    }
    uf.into_partition()
}

pub fn principal_congruence(d: &LatticeDiagram, a: usize, b: usize) -> Partition {
    con_generated(d, &[(a, b)])
}

/// Checks compatibility of an arbitrary partition with meet and join.
pub fn is_congruence(d: &LatticeDiagram, part: &Partition) -> bool {
    if part.n() != d.n() {
        return false;
    }
    for block in part.blocks() {
        let rep = block[0];
        for &x in &block[1..] {
            for c in 0..d.n() {
                if !part.same(d.meet(rep, c), d.meet(x, c))
                    || !part.same(d.join(rep, c), d.join(x, c))
                {
                    return false;
                }
            }
        }
    }
    true
}

#[derive(Clone, Debug)]
pub struct ConLattice {
    /// All congruences in canonical order; index 0 is the identity.
    pub elements: Vec<Partition>,
    pub lattice: FiniteLattice,
}

impl ConLattice {
    pub fn index_of(&self, p: &Partition) -> Option<usize> {
        self.elements.binary_search(p).ok()
    }

    /// Join-irreducible congruences, as indices into `elements`.
    pub fn jir(&self) -> Vec<usize> {
        self.lattice.jir()
    }

    /// Poset of join-irreducible congruences, labelled by their index.
    pub fn jir_poset(&self) -> Poset {
        let jir = self.jir();
        let labels: Vec<String> = jir.iter().map(|&i| format!("con{i}")).collect();
        let mut pairs = Vec::new();
        for (a, &ia) in jir.iter().enumerate() {
            for (b, &ib) in jir.iter().enumerate() {
                if a != b && self.lattice.leq(ia, ib) {
                    pairs.push((a, b));
                }
            }
        }
        Poset::new(labels, &pairs).expect("congruence order restricted to Jir")
    }
}

/// The whole congruence lattice: all joins of edge-principal congruences,
/// ordered by refinement.
pub fn con_lattice(d: &LatticeDiagram) -> ConLattice {
    let mut principals: BTreeSet<Partition> = BTreeSet::new();
    for &(u, v) in d.covers() {
        principals.insert(principal_congruence(d, u, v));
    }
    let principals: Vec<Partition> = principals.into_iter().collect();
    let mut all: BTreeSet<Partition> = BTreeSet::new();
    all.insert(Partition::identity(d.n()));
    let mut work: Vec<Partition> = all.iter().cloned().collect();
    while let Some(e) = work.pop() {
        for p in &principals {
            let j = e.join(p);
            if all.insert(j.clone()) {
                work.push(j);
            }
        }
    }
    let elements: Vec<Partition> = all.into_iter().collect();
    let n = elements.len();
    let mut leq = vec![false; n * n];
    for (i, a) in elements.iter().enumerate() {
        for (j, b) in elements.iter().enumerate() {
            leq[i * n + j] = a.leq(b);
        }
    }
    let lattice = FiniteLattice::from_leq(n, leq).expect("congruences form a lattice");
    ConLattice { elements, lattice }
}

/// The order isomorphism `Lamp L → Jir(Con L)`, `I ↦ con(Foot I, Peak I)`.
/// Returns, per lamp, the index of its congruence in `con.elements`;
/// fails if the map is not a bijection onto the join-irreducibles or not an
/// order isomorphism against the lamp poset.
pub fn phi_iso(
    d: &LatticeDiagram,
    lamps: &[Lamp],
    lamp_poset: &Poset,
    con: &ConLattice,
) -> Result<Vec<usize>> {
    let jir: BTreeSet<usize> = con.jir().into_iter().collect();
    let mut image = Vec::with_capacity(lamps.len());
    for lamp in lamps {
        let p = principal_congruence(d, lamp.foot, lamp.peak);
        let idx = con
            .index_of(&p)
            .ok_or_else(|| Error::IsoFailure("principal congruence missing from Con".into()))?;
        if !jir.contains(&idx) {
            return Err(Error::IsoFailure(format!(
                "con(Foot {f}, Peak) is not join-irreducible",
                f = d.label(lamp.foot)
            )));
        }
        image.push(idx);
    }
    let distinct: BTreeSet<usize> = image.iter().copied().collect();
    if distinct.len() != lamps.len() || distinct.len() != jir.len() {
        return Err(Error::IsoFailure(format!(
            "{} lamps vs {} join-irreducible congruences",
            lamps.len(),
            jir.len()
        )));
    }
    for a in 0..lamps.len() {
        for b in 0..lamps.len() {
            let lamp_le = lamp_poset.leq(a, b);
            let con_le = con.lattice.leq(image[a], image[b]);
            if lamp_le != con_le {
                return Err(Error::IsoFailure(format!(
                    "order mismatch between lamps {} and {}",
                    d.label(lamps[a].foot),
                    d.label(lamps[b].foot)
                )));
            }
        }
    }
    Ok(image)
}

/// Swing-path machinery over prime intervals: allowed steps are between
/// tubes of one lamp, down-perspectivities, and from `hhl/hhr` of a lamp to
/// that lamp's tubes.
pub struct SwingIndex {
    edges: Vec<(usize, usize)>,
    edge_ix: BTreeMap<(usize, usize), usize>,
    succ: Vec<Vec<usize>>,
    /// Lamp owning the top edge of each edge's trajectory.
    top_owner: Vec<usize>,
    /// Lamp index when the edge is a neon tube.
    tube_of: Vec<Option<usize>>,
}

impl SwingIndex {
    pub fn new(d: &LatticeDiagram, lamps: &[Lamp], trajs: &[Trajectory]) -> Self {
        let edges: Vec<(usize, usize)> = d.covers().to_vec();
        let edge_ix: BTreeMap<(usize, usize), usize> =
            edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let mut tube_of = vec![None; edges.len()];
        for (li, lamp) in lamps.iter().enumerate() {
            for &t in &lamp.tubes {
                tube_of[edge_ix[&t]] = Some(li);
            }
        }
        let mut top_owner = vec![usize::MAX; edges.len()];
        for traj in trajs {
            let owner = lamps::tube_owner(lamps, traj.top).expect("top edge is a tube");
            for e in &traj.edges {
                top_owner[edge_ix[e]] = owner;
            }
        }
        let mut succ: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); edges.len()];
        // tube-to-tube inside one lamp
        for lamp in lamps {
            for &a in &lamp.tubes {
                for &b in &lamp.tubes {
                    if a != b {
                        succ[edge_ix[&a]].insert(edge_ix[&b]);
                    }
                }
            }
        }
        // down-perspectivity
        for (i, &a) in edges.iter().enumerate() {
            for (j, &b) in edges.iter().enumerate() {
                if i != j && d.meet(a.0, b.1) == b.0 && d.join(a.0, b.1) == a.1 {
                    succ[i].insert(j);
                }
            }
        }
        // hhl/hhr into the lamp's tubes
        for lamp in lamps.iter().filter(|l| l.is_internal()) {
            let (hhl, hhr) = lamps::hh_edges(d, lamp).expect("internal lamp");
            for h in [hhl, hhr] {
                for &t in &lamp.tubes {
                    succ[edge_ix[&h]].insert(edge_ix[&t]);
                }
            }
        }
        SwingIndex {
            edges,
            edge_ix,
            succ: succ.into_iter().map(|s| s.into_iter().collect()).collect(),
            top_owner,
            tube_of,
        }
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    fn reach(&self, from: usize) -> Vec<bool> {
        let mut seen = vec![false; self.edges.len()];
        let mut stack = vec![from];
        while let Some(e) = stack.pop() {
            for &f in &self.succ[e] {
                if !seen[f] {
                    seen[f] = true;
                    stack.push(f);
                }
            }
        }
        seen
    }

    /// Decides `con(q) ⊋ con(p)` by the path criterion: a swing/perspectivity
    /// path must exist and the two edges must not generate the same
    /// congruence (same congruence means the trajectory top of `p` belongs
    /// to the lamp of `q`).
    pub fn swing_leq(&self, d: &LatticeDiagram, q: (usize, usize), p: (usize, usize)) -> Result<bool> {
        let qi = *self
            .edge_ix
            .get(&q)
            .ok_or_else(|| Error::UnknownEdge(d.label(q.0).into(), d.label(q.1).into()))?;
        let pi = *self
            .edge_ix
            .get(&p)
            .ok_or_else(|| Error::UnknownEdge(d.label(p.0).into(), d.label(p.1).into()))?;
        let q_lamp = self.tube_of[qi]
            .ok_or_else(|| Error::NotANeonTube(d.label(q.0).into(), d.label(q.1).into()))?;
        if self.top_owner[pi] == q_lamp {
            return Ok(false);
        }
        Ok(self.reach(qi)[pi])
    }

    /// All edges whose congruence is strictly below `con(q)`, by paths.
    pub fn strictly_below(&self, d: &LatticeDiagram, q: (usize, usize)) -> Result<Vec<bool>> {
        let qi = *self
            .edge_ix
            .get(&q)
            .ok_or_else(|| Error::UnknownEdge(d.label(q.0).into(), d.label(q.1).into()))?;
        let q_lamp = self.tube_of[qi]
            .ok_or_else(|| Error::NotANeonTube(d.label(q.0).into(), d.label(q.1).into()))?;
        let reach = self.reach(qi);
        Ok((0..self.edges.len())
            .map(|pi| reach[pi] && self.top_owner[pi] != q_lamp)
            .collect())
    }
}
