//! Oriented link diagrams in PD form and the local surgeries used by the
//! skein calculus.
//!
//! Slot convention: a crossing is `[a, b, c, d]` with `a` the incoming
//! under-strand and the remaining slots read counterclockwise, so the
//! under-strand runs `a → c`. A crossing is positive when the over-strand
//! runs `d → b` and negative when it runs `b → d`.

mod braid;
mod canon;
mod pd;
mod seifert;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use canon::CanonicalKey;

/// Arc label: an edge of the diagram between two crossing slots.
pub type Arc = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("malformed diagram code: {0}")]
    Malformed(String),
    #[error("arc labels must cover 1..={expected} exactly twice each: {detail}")]
    BadLabels { expected: usize, detail: String },
    #[error("no coherent strand orientation: {0}")]
    InconsistentOrientation(String),
    #[error("diagram is not planar")]
    NonPlanar,
    #[error("crossing index {index} out of range for a diagram with {count} crossings")]
    IndexOutOfRange { index: usize, count: usize },
    #[error("empty braid word")]
    EmptyBraid,
    #[error("braid letter {letter} is invalid on {strands} strands")]
    BadBraidLetter { letter: i64, strands: usize },
    #[error("diagram is split into {0} pieces")]
    Split(usize),
    #[error("diagram has no components")]
    Empty,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn value(self) -> i32 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Crossing {
    slots: [Arc; 4],
    sign: Sign,
}

impl Crossing {
    pub fn new(slots: [Arc; 4], sign: Sign) -> Self {
        Self { slots, sign }
    }

    pub fn slots(&self) -> [Arc; 4] {
        self.slots
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn over_in_slot(&self) -> usize {
        match self.sign {
            Sign::Positive => 3,
            Sign::Negative => 1,
        }
    }

    pub fn over_out_slot(&self) -> usize {
        match self.sign {
            Sign::Positive => 1,
            Sign::Negative => 3,
        }
    }

    pub fn is_incoming(&self, slot: usize) -> bool {
        slot == 0 || slot == self.over_in_slot()
    }

    pub fn under_in(&self) -> Arc {
        self.slots[0]
    }

    pub fn under_out(&self) -> Arc {
        self.slots[2]
    }

    pub fn over_in(&self) -> Arc {
        self.slots[self.over_in_slot()]
    }

    pub fn over_out(&self) -> Arc {
        self.slots[self.over_out_slot()]
    }

    /// Slot through which the strand entering at `slot` leaves.
    pub fn exit_slot(&self, slot: usize) -> usize {
        if slot == 0 {
            2
        } else {
            self.over_out_slot()
        }
    }

    /// The same crossing with over and under strands exchanged.
    pub fn switched(&self) -> Self {
        let [a, b, c, d] = self.slots;
        match self.sign {
            // new under-strand is the old over-strand d → b
            Sign::Positive => Self::new([d, a, b, c], Sign::Negative),
            // new under-strand is the old over-strand b → d
            Sign::Negative => Self::new([b, c, d, a], Sign::Positive),
        }
    }

    fn map_labels(&self, f: impl Fn(Arc) -> Arc) -> Self {
        Self::new(self.slots.map(f), self.sign)
    }
}

/// One oriented component: its arcs in traversal order starting at the
/// basepoint. A component without crossings has no arcs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Component {
    arcs: Vec<Arc>,
}

impl Component {
    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn basepoint(&self) -> Option<Arc> {
        self.arcs.first().copied()
    }

    pub fn is_crossingless(&self) -> bool {
        self.arcs.is_empty()
    }
}

/// Where an arc starts (`tail`) and ends (`head`), as `(crossing, slot)`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Ends {
    pub tail: (usize, usize),
    pub head: (usize, usize),
}

/// A validated oriented link diagram. Arc labels are `1..=2c`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Diagram {
    crossings: Vec<Crossing>,
    components: Vec<Component>,
}

impl Diagram {
    /// The 0-crossing unknot.
    pub fn unknot() -> Self {
        Self::unlink(1)
    }

    /// `r` disjoint crossingless circles.
    pub fn unlink(r: usize) -> Self {
        Self {
            crossings: vec![],
            components: vec![Component { arcs: vec![] }; r],
        }
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn arc_count(&self) -> usize {
        2 * self.crossings.len()
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn is_knot(&self) -> bool {
        self.components.len() == 1
    }

    pub fn crossingless_components(&self) -> usize {
        self.components.iter().filter(|c| c.is_crossingless()).count()
    }

    pub fn signs(&self) -> Vec<Sign> {
        self.crossings.iter().map(|c| c.sign).collect()
    }

    pub fn writhe(&self) -> i32 {
        self.crossings.iter().map(|c| c.sign.value()).sum()
    }

    /// Index of the component containing `arc`.
    pub fn component_of(&self, arc: Arc) -> Option<usize> {
        self.components.iter().position(|c| c.arcs.contains(&arc))
    }

    pub(crate) fn ends(&self) -> Vec<Ends> {
        let mut ends = vec![Ends { tail: (0, 0), head: (0, 0) }; self.arc_count() + 1];
        for (x, c) in self.crossings.iter().enumerate() {
            for (s, &a) in c.slots.iter().enumerate() {
                if c.is_incoming(s) {
                    ends[a as usize].head = (x, s);
                } else {
                    ends[a as usize].tail = (x, s);
                }
            }
        }
        ends
    }

    /// Builds a diagram from oriented crossings with arbitrary labels.
    ///
    /// Components are traced starting from the `hints` arcs (in order, when
    /// still present), then from the remaining arcs in ascending label order.
    /// With `relabel`, arcs are renumbered `1..=2c` along the traversal.
    pub(crate) fn assemble(
        crossings: Vec<Crossing>,
        crossingless: usize,
        hints: &[Arc],
        relabel: bool,
    ) -> Result<Self, DiagramError> {
        // (crossing, slot) where each arc starts and ends
        type Slot = Option<(usize, usize)>;
        let mut ends: HashMap<Arc, (Slot, Slot)> = HashMap::new();
        for (x, c) in crossings.iter().enumerate() {
            for (s, &a) in c.slots.iter().enumerate() {
                let e = ends.entry(a).or_default();
                let slot = if c.is_incoming(s) { &mut e.1 } else { &mut e.0 };
                if slot.replace((x, s)).is_some() {
                    return Err(DiagramError::InconsistentOrientation(format!(
                        "arc {a} has two {} ends",
                        if c.is_incoming(s) { "incoming" } else { "outgoing" }
                    )));
                }
            }
        }
        let mut heads = HashMap::with_capacity(ends.len());
        for (&a, &(tail, head)) in &ends {
            match (tail, head) {
                (Some(_), Some(h)) => {
                    heads.insert(a, h);
                }
                _ => {
                    return Err(DiagramError::InconsistentOrientation(format!("arc {a} is not closed up")));
                }
            }
        }

        let mut labels: Vec<Arc> = heads.keys().copied().collect();
        labels.sort_unstable();
        let starts = hints.iter().copied().filter(|a| heads.contains_key(a)).chain(labels.iter().copied());

        let mut visited: HashMap<Arc, Arc> = HashMap::with_capacity(labels.len());
        let mut components = Vec::new();
        let mut next_label: Arc = 1;
        for start in starts {
            if visited.contains_key(&start) {
                continue;
            }
            let mut arcs = Vec::new();
            let mut cur = start;
            loop {
                let new = if relabel { next_label } else { cur };
                next_label += 1;
                visited.insert(cur, new);
                arcs.push(new);
                let (x, s) = heads[&cur];
                let c = &crossings[x];
                cur = c.slots[c.exit_slot(s)];
                if cur == start {
                    break;
                }
                if visited.contains_key(&cur) {
                    return Err(DiagramError::InconsistentOrientation(format!("arc {cur} entered twice")));
                }
            }
            components.push(Component { arcs });
        }
        components.extend(std::iter::repeat_n(Component { arcs: vec![] }, crossingless));
        if components.is_empty() {
            return Err(DiagramError::Empty);
        }
        let crossings = if relabel {
            crossings.iter().map(|c| c.map_labels(|a| visited[&a])).collect()
        } else {
            crossings
        };
        Ok(Self { crossings, components })
    }

    /// Checks the closed-diagram label condition and planarity.
    pub fn validate(&self) -> Result<(), DiagramError> {
        let n = self.arc_count();
        let mut seen = vec![0u8; n + 1];
        for c in &self.crossings {
            for a in c.slots {
                if a == 0 || a as usize > n {
                    return Err(DiagramError::BadLabels { expected: n, detail: format!("label {a} out of range") });
                }
                seen[a as usize] += 1;
            }
        }
        if let Some(a) = (1..=n).find(|&a| seen[a] != 2) {
            return Err(DiagramError::BadLabels {
                expected: n,
                detail: format!("label {a} appears {} times", seen[a]),
            });
        }
        let covered: usize = self.components.iter().map(|c| c.arcs.len()).sum();
        if covered != n || self.components.is_empty() {
            return Err(DiagramError::Malformed("component partition does not cover the arcs".into()));
        }
        if !self.is_planar() {
            return Err(DiagramError::NonPlanar);
        }
        Ok(())
    }

    /// Every connected piece with `c` crossings must have `c + 2` faces.
    fn is_planar(&self) -> bool {
        let n = self.crossings.len();
        if n == 0 {
            return true;
        }
        let mut other_end = vec![[(0usize, 0usize); 4]; n];
        let mut first: HashMap<Arc, (usize, usize)> = HashMap::new();
        for (x, c) in self.crossings.iter().enumerate() {
            for (s, &a) in c.slots.iter().enumerate() {
                if let Some((y, t)) = first.remove(&a) {
                    other_end[x][s] = (y, t);
                    other_end[y][t] = (x, s);
                } else {
                    first.insert(a, (x, s));
                }
            }
        }
        let mut seen = vec![[false; 4]; n];
        let mut faces = 0;
        for x in 0..n {
            for s in 0..4 {
                if seen[x][s] {
                    continue;
                }
                faces += 1;
                let (mut y, mut t) = (x, s);
                while !seen[y][t] {
                    seen[y][t] = true;
                    let (y2, t2) = other_end[y][t];
                    (y, t) = (y2, (t2 + 1) % 4);
                }
            }
        }
        let pieces = self.crossing_pieces().len();
        faces == n + 2 * pieces
    }

    /// Groups crossing indices into connected pieces of the diagram graph.
    fn crossing_pieces(&self) -> Vec<Vec<usize>> {
        let n = self.crossings.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut i: usize) -> usize {
            while p[i] != i {
                p[i] = p[p[i]];
                i = p[i];
            }
            i
        }
        let mut first: HashMap<Arc, usize> = HashMap::new();
        for (x, c) in self.crossings.iter().enumerate() {
            for a in c.slots {
                if let Some(y) = first.insert(a, x) {
                    let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
                    parent[rx] = ry;
                }
            }
        }
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut index: HashMap<usize, usize> = HashMap::new();
        for x in 0..n {
            let r = find(&mut parent, x);
            let g = *index.entry(r).or_insert_with(|| {
                groups.push(vec![]);
                groups.len() - 1
            });
            groups[g].push(x);
        }
        groups
    }

    fn check_index(&self, i: usize) -> Result<(), DiagramError> {
        if i < self.crossings.len() {
            Ok(())
        } else {
            Err(DiagramError::IndexOutOfRange { index: i, count: self.crossings.len() })
        }
    }

    fn basepoints(&self) -> Vec<Arc> {
        self.components.iter().filter_map(Component::basepoint).collect()
    }

    /// Exchanges over and under at crossing `i`; the sign flips and the
    /// component structure is untouched.
    pub fn switch_crossing(&self, i: usize) -> Result<Self, DiagramError> {
        self.check_index(i)?;
        let mut d = self.clone();
        d.crossings[i] = d.crossings[i].switched();
        Ok(d)
    }

    /// Oriented smoothing at crossing `i`: the incoming under-strand is
    /// joined to the outgoing over-strand and vice versa.
    pub fn smooth_crossing(&self, i: usize) -> Result<Self, DiagramError> {
        self.check_index(i)?;
        let c = self.crossings[i];
        let mut rest: Vec<Crossing> = self.crossings.iter().enumerate().filter(|&(x, _)| x != i).map(|(_, c)| *c).collect();
        let mut crossingless = self.crossingless_components();
        for (incoming, outgoing) in [(c.under_in(), c.over_out()), (c.over_in(), c.under_out())] {
            if incoming == outgoing {
                crossingless += 1;
            } else {
                // the outgoing arc now continues the incoming one
                for r in rest.iter_mut() {
                    *r = r.map_labels(|a| if a == outgoing { incoming } else { a });
                }
            }
        }
        Self::assemble(rest, crossingless, &self.basepoints(), true)
    }

    /// Smooths every crossing; the result is the set of Seifert circles.
    pub fn smooth_all(&self) -> Self {
        Self::unlink(self.seifert_circles())
    }

    /// Removes Reidemeister-1 kinks until none remain.
    pub fn reduce_r1(&self) -> Self {
        let mut d = self.clone();
        while let Some(x) = d.find_kink() {
            d = d.remove_kink(x);
        }
        d
    }

    fn find_kink(&self) -> Option<usize> {
        self.crossings.iter().position(|c| {
            let s = c.slots;
            (0..4).any(|i| s[i] == s[(i + 1) % 4])
        })
    }

    fn remove_kink(&self, x: usize) -> Self {
        let c = self.crossings[x];
        let s = c.slots;
        let loop_arc = (0..4).map(|i| s[i]).find(|&a| s.iter().filter(|&&b| b == a).count() == 2).expect("kink");
        let mut rest: Vec<Crossing> = self.crossings.iter().enumerate().filter(|&(y, _)| y != x).map(|(_, c)| *c).collect();
        let mut crossingless = self.crossingless_components();
        let others: Vec<usize> = (0..4).filter(|&i| s[i] != loop_arc).collect();
        let (incoming, outgoing) = if c.is_incoming(others[0]) {
            (s[others[0]], s[others[1]])
        } else {
            (s[others[1]], s[others[0]])
        };
        if incoming == outgoing || others.len() < 2 {
            crossingless += 1;
        } else {
            for r in rest.iter_mut() {
                *r = r.map_labels(|a| if a == outgoing { incoming } else { a });
            }
        }
        let hints: Vec<Arc> = self
            .basepoints()
            .into_iter()
            .map(|b| if b == loop_arc { outgoing } else { b })
            .map(|b| if b == outgoing { incoming } else { b })
            .collect();
        Self::assemble(rest, crossingless, &hints, true).expect("kink removal preserves validity")
    }

    /// Mirror image: every crossing switched.
    pub fn mirror(&self) -> Self {
        Self {
            crossings: self.crossings.iter().map(Crossing::switched).collect(),
            components: self.components.clone(),
        }
    }

    /// Disjoint union, with `other`'s labels shifted past this diagram's.
    pub fn disjoint_union(&self, other: &Self) -> Self {
        let shift = self.arc_count() as Arc;
        let mut crossings = self.crossings.clone();
        crossings.extend(other.crossings.iter().map(|c| c.map_labels(|a| a + shift)));
        let mut components: Vec<Component> = self.components.iter().filter(|c| !c.is_crossingless()).cloned().collect();
        components.extend(
            other
                .components
                .iter()
                .filter(|c| !c.is_crossingless())
                .map(|c| Component { arcs: c.arcs.iter().map(|a| a + shift).collect() }),
        );
        components.extend(std::iter::repeat_n(
            Component { arcs: vec![] },
            self.crossingless_components() + other.crossingless_components(),
        ));
        Self { crossings, components }
    }

    /// Connected pieces of the diagram graph; each crossingless circle is
    /// its own piece.
    pub fn split_components(&self) -> Vec<Self> {
        let mut out = Vec::new();
        for group in self.crossing_pieces() {
            let crossings = group.iter().map(|&x| self.crossings[x]).collect();
            out.push(Self::assemble(crossings, 0, &self.basepoints(), true).expect("piece of a valid diagram"));
        }
        out.extend(std::iter::repeat_n(Self::unknot(), self.crossingless_components()));
        out
    }

    pub fn is_split(&self) -> bool {
        self.crossing_pieces().len() + self.crossingless_components() > 1
    }

    /// The diagram with its components traced from the given basepoints,
    /// in that order.
    pub fn with_basepoints(&self, basepoints: &[Arc]) -> Self {
        Self::assemble(self.crossings.clone(), self.crossingless_components(), basepoints, false)
            .expect("retracing a valid diagram")
    }

    /// First crossing met as an under-crossing before it is met as an
    /// over-crossing, walking the components in order from their
    /// basepoints. `None` means the diagram is descending.
    pub fn first_violation(&self) -> Option<usize> {
        self.violations().into_iter().next()
    }

    /// All crossings first met from below, in traversal order.
    pub fn violations(&self) -> Vec<usize> {
        let ends = self.ends();
        let mut visited = vec![false; self.crossings.len()];
        let mut out = Vec::new();
        for comp in &self.components {
            for &a in &comp.arcs {
                let (x, s) = ends[a as usize].head;
                if !visited[x] {
                    visited[x] = true;
                    if s == 0 {
                        out.push(x);
                    }
                }
            }
        }
        out
    }
}

/// `(K₊, K₋, K₀)` at one crossing of a diagram.
#[derive(Clone, Debug)]
pub struct SkeinTriple {
    pub plus: Diagram,
    pub minus: Diagram,
    pub zero: Diagram,
    pub site: usize,
}

impl SkeinTriple {
    pub fn at(d: &Diagram, site: usize) -> Result<Self, DiagramError> {
        let switched = d.switch_crossing(site)?;
        let zero = d.smooth_crossing(site)?;
        let (plus, minus) = match d.crossings[site].sign {
            Sign::Positive => (d.clone(), switched),
            Sign::Negative => (switched, d.clone()),
        };
        Ok(Self { plus, minus, zero, site })
    }

    /// Every triple of a diagram, one per crossing.
    pub fn all(d: &Diagram) -> Vec<Self> {
        (0..d.crossing_count()).map(|i| Self::at(d, i).expect("index in range")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trefoil() -> Diagram {
        Diagram::parse_pd("[[1,5,2,4],[3,1,4,6],[5,3,6,2]]").unwrap()
    }

    #[test]
    fn switch_is_an_involution() {
        let t = trefoil();
        let s = t.switch_crossing(0).unwrap();
        assert_eq!(s.signs(), vec![Sign::Negative, Sign::Positive, Sign::Positive]);
        assert_eq!(s.switch_crossing(0).unwrap(), t);
        assert_eq!(s.components(), t.components());
        assert!(s.validate().is_ok());
    }

    #[test]
    fn switch_out_of_range() {
        assert_eq!(
            Diagram::unknot().switch_crossing(0),
            Err(DiagramError::IndexOutOfRange { index: 0, count: 0 })
        );
        assert!(trefoil().smooth_crossing(3).is_err());
    }

    #[test]
    fn smoothing_the_trefoil_gives_a_positive_hopf_link() {
        let t = trefoil();
        for i in 0..3 {
            let h = t.smooth_crossing(i).unwrap();
            assert_eq!(h.crossing_count(), 2);
            assert_eq!(h.component_count(), 2);
            assert_eq!(h.signs(), vec![Sign::Positive, Sign::Positive]);
            assert!(h.validate().is_ok());
        }
    }

    #[test]
    fn smoothing_a_kink() {
        let k = Diagram::parse_braid("1").unwrap();
        let u = k.smooth_crossing(0).unwrap();
        assert_eq!(u.crossing_count(), 0);
        assert_eq!(u.component_count(), 2);
    }

    #[test]
    fn r1_reduction() {
        assert_eq!(Diagram::parse_braid("1").unwrap().reduce_r1(), Diagram::unknot());
        assert_eq!(trefoil().reduce_r1(), trefoil());
        // two nested kinks on one strand
        let double = Diagram::parse_pd("[[1,4,2,1],[2,4,3,3]]").unwrap();
        assert_eq!(double.component_count(), 1);
        assert_eq!(double.reduce_r1(), Diagram::unknot());
        // kinks added to a trefoil by braid stabilisation
        let stab = Diagram::parse_braid("1 1 1 2").unwrap();
        assert_eq!(stab.reduce_r1().crossing_count(), 3);
    }

    #[test]
    fn split_detection() {
        assert_eq!(Diagram::unlink(2).split_components().len(), 2);
        assert_eq!(trefoil().split_components().len(), 1);
        let u = trefoil().disjoint_union(&Diagram::unknot());
        assert!(u.validate().is_ok());
        let pieces = u.split_components();
        assert_eq!(pieces.len(), 2);
        assert_eq!(pieces[0].crossing_count(), 3);
        assert_eq!(pieces[1], Diagram::unknot());
        let tt = trefoil().disjoint_union(&trefoil());
        assert_eq!(tt.split_components().len(), 2);
        assert!(tt.is_split());
        assert!(!trefoil().is_split());
    }

    #[test]
    fn descending_traversal() {
        let t = trefoil();
        assert!(t.first_violation().is_some());
        assert_eq!(Diagram::unknot().first_violation(), None);
        // a standard trefoil alternates, so it has violations whatever the basepoint
        for b in 1..=6 {
            assert!(!t.with_basepoints(&[b]).violations().is_empty());
        }
    }

    #[test]
    fn skein_triple_invariants() {
        let t = trefoil();
        for tr in SkeinTriple::all(&t) {
            assert_eq!(tr.plus.crossings()[tr.site].sign(), Sign::Positive);
            assert_eq!(tr.minus.crossings()[tr.site].sign(), Sign::Negative);
            assert_eq!(tr.zero.component_count(), tr.plus.component_count() + 1);
        }
    }

    #[test]
    fn non_planar_code_is_rejected() {
        // virtual trefoil: every label appears twice but the faces do not close up
        assert_eq!(Diagram::parse_pd("[[3,2,4,1],[4,3,1,2]]"), Err(DiagramError::NonPlanar));
    }
}
