//! Finite posets: order filters, isomorphism testing, and the two poset
//! constructions (ordinal sum at an element, adding a brother).

use std::collections::BTreeSet;

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Poset {
    labels: Vec<String>,
    leq: Vec<bool>,
    covers: Vec<(usize, usize)>,
}

impl Poset {
    /// Builds from labels and a relation given as pairs `lo <= hi`; the order
    /// is the reflexive-transitive closure, which must be antisymmetric.
    pub fn new(labels: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        {
            let mut seen = BTreeSet::new();
            for l in &labels {
                if !seen.insert(l.clone()) {
                    return Err(Error::LabelClash(l.clone()));
                }
            }
        }
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for &(a, b) in pairs {
            leq[a * n + b] = true;
        }
        // Warshall closure.
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] {
                    for j in 0..n {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && leq[i * n + j] && leq[j * n + i] {
                    return Err(Error::LabelClash(format!(
                        "cycle through {} and {}",
                        labels[i], labels[j]
                    )));
                }
            }
        }
        let mut covers = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && leq[i * n + j] {
                    let direct = (0..n)
                        .all(|k| k == i || k == j || !(leq[i * n + k] && leq[k * n + j]));
                    if direct {
                        covers.push((i, j));
                    }
                }
            }
        }
        covers.sort();
        Ok(Poset {
            labels,
            leq,
            covers,
        })
    }

    pub fn from_labels(labels: Vec<String>, pairs: &[(String, String)]) -> Result<Self> {
        let idx = |l: &str, labels: &[String]| {
            labels
                .iter()
                .position(|x| x == l)
                .ok_or_else(|| Error::UnknownLabel(l.to_string()))
        };
        let mut ipairs = Vec::with_capacity(pairs.len());
        for (a, b) in pairs {
            ipairs.push((idx(a, &labels)?, idx(b, &labels)?));
        }
        Poset::new(labels, &ipairs)
    }

    pub fn empty() -> Self {
        Poset {
            labels: Vec::new(),
            leq: Vec::new(),
            covers: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn idx(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|x| x == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.n() + b]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn upper_covers(&self, x: usize) -> Vec<usize> {
        self.covers
            .iter()
            .filter(|&&(a, _)| a == x)
            .map(|&(_, b)| b)
            .collect()
    }

    pub fn lower_covers(&self, x: usize) -> Vec<usize> {
        self.covers
            .iter()
            .filter(|&&(_, b)| b == x)
            .map(|&(a, _)| a)
            .collect()
    }

    pub fn maximal(&self) -> Vec<usize> {
        (0..self.n())
            .filter(|&x| (0..self.n()).all(|y| !self.lt(x, y)))
            .collect()
    }

    pub fn minimal(&self) -> Vec<usize> {
        (0..self.n())
            .filter(|&x| (0..self.n()).all(|y| !self.lt(y, x)))
            .collect()
    }

    pub fn up_set(&self, x: usize) -> BTreeSet<usize> {
        (0..self.n()).filter(|&y| self.leq(x, y)).collect()
    }

    /// All order filters (up-sets) including the empty one, as sorted element
    /// sets, ordered by inclusion-compatible enumeration.
    pub fn order_filters(&self) -> Vec<BTreeSet<usize>> {
        // Process elements so that all successors of an element come earlier;
        // include x only if all its upper covers are in.
        let n = self.n();
        let mut topo: Vec<usize> = (0..n).collect();
        topo.sort_by_key(|&x| std::cmp::Reverse(self.up_set(x).len()));
        // reverse-topological: elements with larger up-sets (lower elements) last
        let mut result = Vec::new();
        let mut current: Vec<usize> = Vec::new();
        fn rec(
            p: &Poset,
            topo: &[usize],
            i: usize,
            current: &mut Vec<usize>,
            result: &mut Vec<BTreeSet<usize>>,
        ) {
            if i == topo.len() {
                result.push(current.iter().copied().collect());
                return;
            }
            let x = topo[i];
            // exclude x
            rec(p, topo, i + 1, current, result);
            // include x if permitted
            let ok = p
                .upper_covers(x)
                .iter()
                .all(|u| current.contains(u));
            if ok {
                current.push(x);
                rec(p, topo, i + 1, current, result);
                current.pop();
            }
        }
        // sort maximal-first so upper covers are decided before x
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&x| self.up_set(x).len());
        let _ = topo;
        rec(self, &order, 0, &mut current, &mut result);
        result.sort_by_key(|s| (s.len(), s.iter().copied().collect::<Vec<_>>()));
        result
    }

    /// Restriction to a subset, keeping labels.
    pub fn restrict(&self, keep: &BTreeSet<usize>) -> Poset {
        let elems: Vec<usize> = keep.iter().copied().collect();
        let labels: Vec<String> = elems.iter().map(|&i| self.labels[i].clone()).collect();
        let mut pairs = Vec::new();
        for (a, &ia) in elems.iter().enumerate() {
            for (b, &ib) in elems.iter().enumerate() {
                if a != b && self.leq(ia, ib) {
                    pairs.push((a, b));
                }
            }
        }
        Poset::new(labels, &pairs).expect("restriction of a poset is a poset")
    }

    fn invariant(&self, x: usize) -> (usize, usize, usize, usize) {
        (
            self.up_set(x).len(),
            (0..self.n()).filter(|&y| self.leq(y, x)).count(),
            self.upper_covers(x).len(),
            self.lower_covers(x).len(),
        )
    }

    /// Order isomorphism by backtracking with invariant pruning. Returns a
    /// mapping from self-indices to other-indices.
    pub fn isomorphism(&self, other: &Poset) -> Option<Vec<usize>> {
        if self.n() != other.n() {
            return None;
        }
        let n = self.n();
        let inv_a: Vec<_> = (0..n).map(|x| self.invariant(x)).collect();
        let inv_b: Vec<_> = (0..n).map(|x| other.invariant(x)).collect();
        {
            let mut sa = inv_a.clone();
            let mut sb = inv_b.clone();
            sa.sort();
            sb.sort();
            if sa != sb {
                return None;
            }
        }
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        // Assign in order of rarest invariant first.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&x| inv_a.iter().filter(|&&i| i == inv_a[x]).count());
        #[allow(clippy::too_many_arguments)]
        fn rec(
            a: &Poset,
            b: &Poset,
            inv_a: &[(usize, usize, usize, usize)],
            inv_b: &[(usize, usize, usize, usize)],
            order: &[usize],
            pos: usize,
            map: &mut [usize],
            used: &mut [bool],
        ) -> bool {
            if pos == order.len() {
                return true;
            }
            let x = order[pos];
            for y in 0..b.n() {
                if used[y] || inv_a[x] != inv_b[y] {
                    continue;
                }
                let consistent = order[..pos].iter().all(|&x2| {
                    let y2 = map[x2];
                    a.leq(x, x2) == b.leq(y, y2) && a.leq(x2, x) == b.leq(y2, y)
                });
                if !consistent {
                    continue;
                }
                map[x] = y;
                used[y] = true;
                if rec(a, b, inv_a, inv_b, order, pos + 1, map, used) {
                    return true;
                }
                map[x] = usize::MAX;
                used[y] = false;
            }
            false
        }
        if rec(
            self, other, &inv_a, &inv_b, &order, 0, &mut map, &mut used,
        ) {
            Some(map)
        } else {
            None
        }
    }

    pub fn is_isomorphic(&self, other: &Poset) -> bool {
        self.isomorphism(other).is_some()
    }

    /// True when some order filter is isomorphic to the two-element chain,
    /// i.e. some element has exactly one other element above it.
    pub fn has_two_chain_filter(&self) -> bool {
        (0..self.n()).any(|x| self.up_set(x).len() == 2)
    }
}

/// Ordinal sum at an element: on `P ∪ Q`, keep both orders and put `x < y`
/// for `x ∈ Q`, `y ∈ P` exactly when `j <= y` in `P`.
pub fn jsum(q: &Poset, j: &str, p: &Poset) -> Result<Poset> {
    for l in q.labels() {
        if p.labels().contains(l) {
            return Err(Error::LabelClash(l.clone()));
        }
    }
    let j = p.idx(j).map_err(|_| Error::JNotInP(j.to_string()))?;
    let mut labels: Vec<String> = p.labels().to_vec();
    labels.extend(q.labels().iter().cloned());
    let np = p.n();
    let mut pairs = Vec::new();
    for a in 0..np {
        for b in 0..np {
            if a != b && p.leq(a, b) {
                pairs.push((a, b));
            }
        }
    }
    for a in 0..q.n() {
        for b in 0..q.n() {
            if a != b && q.leq(a, b) {
                pairs.push((np + a, np + b));
            }
        }
    }
    for x in 0..q.n() {
        for y in 0..np {
            if p.leq(j, y) {
                pairs.push((np + x, y));
            }
        }
    }
    Poset::new(labels, &pairs)
}

/// Adding a brother: a new minimal element `i` whose covers are exactly the
/// covers of `j` in `P`.
pub fn brosum(p: &Poset, j: &str, i: &str) -> Result<Poset> {
    if p.labels().iter().any(|l| l == i) {
        return Err(Error::LabelClash(i.to_string()));
    }
    let j = p.idx(j).map_err(|_| Error::JNotInP(j.to_string()))?;
    let mut labels = p.labels().to_vec();
    labels.push(i.to_string());
    let ni = p.n();
    let mut pairs = Vec::new();
    for &(a, b) in p.covers() {
        pairs.push((a, b));
    }
    for u in p.upper_covers(j) {
        pairs.push((ni, u));
    }
    Poset::new(labels, &pairs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v_poset() -> Poset {
        Poset::from_labels(
            vec!["I".into(), "A".into(), "B".into()],
            &[("I".into(), "A".into()), ("I".into(), "B".into())],
        )
        .unwrap()
    }

    #[test]
    fn filters_counted() {
        let one = Poset::from_labels(vec!["x".into()], &[]).unwrap();
        assert_eq!(one.order_filters().len(), 2);
        let anti2 =
            Poset::from_labels(vec!["a".into(), "b".into()], &[]).unwrap();
        assert_eq!(anti2.order_filters().len(), 4);
        let chain2 = Poset::from_labels(
            vec!["a".into(), "b".into()],
            &[("a".into(), "b".into())],
        )
        .unwrap();
        assert_eq!(chain2.order_filters().len(), 3);
    }

    #[test]
    fn jsum_v_example() {
        let q = Poset::from_labels(vec!["q".into()], &[]).unwrap();
        let s = jsum(&q, "I", &v_poset()).unwrap();
        assert_eq!(s.n(), 4);
        let (qi, i, a, b) = (
            s.idx("q").unwrap(),
            s.idx("I").unwrap(),
            s.idx("A").unwrap(),
            s.idx("B").unwrap(),
        );
        assert!(s.lt(qi, i) && s.lt(qi, a) && s.lt(qi, b));
        assert!(!s.leq(a, b) && !s.leq(b, a));
    }

    #[test]
    fn jsum_empty_q() {
        let p = v_poset();
        let s = jsum(&Poset::empty(), "I", &p).unwrap();
        assert!(s.is_isomorphic(&p));
    }

    #[test]
    fn jsum_at_maximal() {
        let q = Poset::from_labels(vec!["q".into()], &[]).unwrap();
        let s = jsum(&q, "A", &v_poset()).unwrap();
        let (qi, a, b) = (
            s.idx("q").unwrap(),
            s.idx("A").unwrap(),
            s.idx("B").unwrap(),
        );
        assert!(s.lt(qi, a));
        assert!(!s.leq(qi, b));
    }

    #[test]
    fn brosum_examples() {
        let p = v_poset();
        let s = brosum(&p, "I", "i2").unwrap();
        let (i2, a, b, i) = (
            s.idx("i2").unwrap(),
            s.idx("A").unwrap(),
            s.idx("B").unwrap(),
            s.idx("I").unwrap(),
        );
        assert!(s.lt(i2, a) && s.lt(i2, b));
        assert!(!s.leq(i2, i) && !s.leq(i, i2));
        // brother of a maximal element is isolated
        let s2 = brosum(&p, "A", "i3").unwrap();
        let i3 = s2.idx("i3").unwrap();
        for x in 0..s2.n() {
            if x != i3 {
                assert!(!s2.leq(i3, x) && !s2.leq(x, i3));
            }
        }
        // covers of the brother always equal covers of j
        let covs: Vec<_> = s.upper_covers(i2).iter().map(|&u| s.label(u).to_string()).collect();
        assert_eq!(covs, vec!["A".to_string(), "B".to_string()]);
    }

    #[test]
    fn dioecious_detector() {
        let chain2 = Poset::from_labels(
            vec!["a".into(), "b".into()],
            &[("a".into(), "b".into())],
        )
        .unwrap();
        assert!(chain2.has_two_chain_filter());
        assert!(!v_poset().has_two_chain_filter());
    }

    #[test]
    fn iso_distinguishes() {
        let v = v_poset();
        let anti3 = Poset::from_labels(
            vec!["x".into(), "y".into(), "z".into()],
            &[],
        )
        .unwrap();
        assert!(!v.is_isomorphic(&anti3));
        let v2 = Poset::from_labels(
            vec!["u".into(), "w".into(), "m".into()],
            &[("m".into(), "u".into()), ("m".into(), "w".into())],
        )
        .unwrap();
        assert!(v.is_isomorphic(&v2));
    }
}
