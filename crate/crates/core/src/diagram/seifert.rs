use super::{Diagram, DiagramError};

impl Diagram {
    /// Number of circles left after the oriented smoothing of every crossing.
    pub fn seifert_circles(&self) -> usize {
        let ends = self.ends();
        let mut seen = vec![false; self.arc_count() + 1];
        let mut circles = self.crossingless_components();
        for start in 1..=self.arc_count() {
            if seen[start] {
                continue;
            }
            circles += 1;
            let mut a = start;
            while !seen[a] {
                seen[a] = true;
                let (x, s) = ends[a].head;
                let c = &self.crossings[x];
                // an incoming strand continues along the other strand's exit
                a = if s == 0 { c.over_out() } else { c.under_out() } as usize;
            }
        }
        circles
    }

    /// Genus of the surface Seifert's algorithm builds on this diagram,
    /// `(c - s + 2 - r) / 2`; an upper bound for the Seifert genus.
    pub fn seifert_genus_bound(&self) -> Result<u32, DiagramError> {
        let pieces = self.split_components().len();
        if pieces > 1 {
            return Err(DiagramError::Split(pieces));
        }
        let c = self.crossing_count() as i64;
        let s = self.seifert_circles() as i64;
        let r = self.component_count() as i64;
        let twice = c - s + 2 - r;
        debug_assert!(twice >= 0 && twice % 2 == 0, "Euler characteristic parity");
        Ok((twice / 2) as u32)
    }
}
