//! Canonical relabelling, used as a memo key.
//!
//! Candidates are produced by ordering the components and choosing a start
//! arc on each, then numbering arcs consecutively along the traversal. The
//! key is the lexicographically smallest sorted crossing list. Equal keys
//! imply identical diagrams; the converse can fail (mirror images and
//! orientation reversals are not identified).

use super::{Arc, Component, Crossing, Diagram, Sign};

const MAX_CANDIDATES: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey {
    crossings: Vec<([Arc; 4], bool)>,
    crossingless: usize,
}

impl Diagram {
    pub fn canonical_key(&self) -> CanonicalKey {
        self.canonical().0
    }

    /// The canonical key together with the diagram relabelled by the
    /// winning candidate, whose components and basepoints are canonical.
    pub fn canonical(&self) -> (CanonicalKey, Diagram) {
        let comps: Vec<&Component> = self.components.iter().filter(|c| !c.is_crossingless()).collect();
        let orders = component_orders(comps.len());
        let sizes: Vec<usize> = comps.iter().map(|c| c.arcs.len()).collect();
        let rotations: usize = sizes.iter().product();
        let full = orders.len().saturating_mul(rotations) <= MAX_CANDIDATES;

        let mut best: Option<(CanonicalKey, Vec<usize>, Vec<usize>)> = None;
        for order in &orders {
            let mut starts = vec![0usize; comps.len()];
            loop {
                let key = self.key_for(&comps, order, &starts);
                if best.as_ref().is_none_or(|(k, _, _)| key < *k) {
                    best = Some((key, order.clone(), starts.clone()));
                }
                if !advance(&mut starts, &sizes, order, full) {
                    break;
                }
            }
        }
        match best {
            None => (CanonicalKey { crossings: vec![], crossingless: self.crossingless_components() }, self.clone()),
            Some((key, order, starts)) => {
                let d = self.relabeled(&comps, &order, &starts);
                (key, d)
            }
        }
    }

    /// New label of each arc, indexed by the old label.
    fn relabel_map(&self, comps: &[&Component], order: &[usize], starts: &[usize]) -> Vec<Arc> {
        let mut map = vec![0; self.arc_count() + 1];
        let mut next: Arc = 1;
        for &ci in order {
            let arcs = &comps[ci].arcs;
            let n = arcs.len();
            for k in 0..n {
                map[arcs[(starts[ci] + k) % n] as usize] = next;
                next += 1;
            }
        }
        map
    }

    fn key_for(&self, comps: &[&Component], order: &[usize], starts: &[usize]) -> CanonicalKey {
        let map = self.relabel_map(comps, order, starts);
        let mut crossings: Vec<([Arc; 4], bool)> = self
            .crossings
            .iter()
            .map(|c| (c.slots.map(|a| map[a as usize]), c.sign == Sign::Positive))
            .collect();
        crossings.sort_unstable();
        CanonicalKey { crossings, crossingless: self.crossingless_components() }
    }

    fn relabeled(&self, comps: &[&Component], order: &[usize], starts: &[usize]) -> Diagram {
        let map = self.relabel_map(comps, order, starts);
        let mut crossings: Vec<Crossing> = self.crossings.iter().map(|c| c.map_labels(|a| map[a as usize])).collect();
        crossings.sort_unstable_by_key(|c| (c.slots, c.sign == Sign::Positive));
        let mut components: Vec<Component> = order
            .iter()
            .map(|&ci| {
                let arcs = &comps[ci].arcs;
                let n = arcs.len();
                Component { arcs: (0..n).map(|k| map[arcs[(starts[ci] + k) % n] as usize]).collect() }
            })
            .collect();
        components.extend(std::iter::repeat_n(Component { arcs: vec![] }, self.crossingless_components()));
        Diagram { crossings, components }
    }
}

fn component_orders(r: usize) -> Vec<Vec<usize>> {
    let identity: Vec<usize> = (0..r).collect();
    if r > 4 {
        let mut rev = identity.clone();
        rev.reverse();
        return vec![identity, rev];
    }
    let mut out = Vec::new();
    permutations(&mut identity.clone(), 0, &mut out);
    out
}

fn permutations(v: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == v.len() {
        out.push(v.clone());
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, out);
        v.swap(k, i);
    }
}

/// Next tuple of start offsets. When the full product is too large only
/// the first component in `order` is rotated.
fn advance(starts: &mut [usize], sizes: &[usize], order: &[usize], full: bool) -> bool {
    let movable: &[usize] = if full { order } else { &order[..1] };
    for &ci in movable {
        starts[ci] += 1;
        if starts[ci] < sizes[ci] {
            return true;
        }
        starts[ci] = 0;
    }
    false
}
