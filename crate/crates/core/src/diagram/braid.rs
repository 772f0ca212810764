//! Closures of braid words.
//!
//! A word is a whitespace-separated list of nonzero integers; `k` is the
//! generator σ_k (a positive crossing between strands `k` and `k+1`) and
//! `-k` its inverse.

use super::{Arc, Crossing, Diagram, DiagramError, Sign};

impl Diagram {
    /// Closure of a braid word on the smallest number of strands it needs.
    pub fn parse_braid(text: &str) -> Result<Self, DiagramError> {
        let word = parse_word(text)?;
        let strands = word.iter().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0) + 1;
        Self::braid_closure(strands, &word)
    }

    /// Standard closure of `word` on `strands` strands. Strands not touched
    /// by any letter become crossingless circles.
    pub fn braid_closure(strands: usize, word: &[i64]) -> Result<Self, DiagramError> {
        if word.is_empty() {
            return Err(DiagramError::EmptyBraid);
        }
        if let Some(&letter) = word.iter().find(|l| **l == 0 || l.unsigned_abs() as usize >= strands) {
            return Err(DiagramError::BadBraidLetter { letter, strands });
        }
        let starts: Vec<Arc> = (1..=strands as Arc).collect();
        let mut current = starts.clone();
        let mut next: Arc = strands as Arc + 1;
        let mut crossings = Vec::with_capacity(word.len());
        for &letter in word {
            let k = letter.unsigned_abs() as usize - 1;
            let (left, right) = (current[k], current[k + 1]);
            let (new_left, new_right) = (next, next + 1);
            next += 2;
            // strands run upwards; the left strand moves to the right
            crossings.push(if letter > 0 {
                Crossing::new([right, new_right, new_left, left], Sign::Positive)
            } else {
                Crossing::new([left, right, new_right, new_left], Sign::Negative)
            });
            current[k] = new_left;
            current[k + 1] = new_right;
        }
        let mut crossingless = 0;
        for (pos, (&start, &end)) in starts.iter().zip(&current).enumerate() {
            if start == end {
                crossingless += 1;
                continue;
            }
            debug_assert!(pos < strands);
            for c in crossings.iter_mut() {
                *c = c.map_labels(|a| if a == end { start } else { a });
            }
        }
        let d = Self::assemble(crossings, crossingless, &starts, true)?;
        debug_assert!(d.validate().is_ok());
        Ok(d)
    }
}

fn parse_word(text: &str) -> Result<Vec<i64>, DiagramError> {
    let word = text
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<i64>().map_err(|_| DiagramError::Malformed(format!("bad braid letter `{s}`"))))
        .collect::<Result<Vec<_>, _>>()?;
    if word.is_empty() {
        return Err(DiagramError::EmptyBraid);
    }
    Ok(word)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trefoil_closure() {
        let t = Diagram::parse_braid("1 1 1").unwrap();
        assert_eq!(t.crossing_count(), 3);
        assert_eq!(t.component_count(), 1);
        assert_eq!(t.writhe(), 3);
    }

    #[test]
    fn cancelling_pair() {
        let d = Diagram::parse_braid("1 -1").unwrap();
        assert_eq!(d.crossing_count(), 2);
        assert_eq!(d.component_count(), 2);
        assert_eq!(d.writhe(), 0);
    }

    #[test]
    fn single_kink() {
        let d = Diagram::parse_braid("1").unwrap();
        assert_eq!(d.crossing_count(), 1);
        assert_eq!(d.component_count(), 1);
    }

    #[test]
    fn hopf_link_and_untouched_strands() {
        let h = Diagram::parse_braid("1 1").unwrap();
        assert_eq!(h.component_count(), 2);
        let d = Diagram::braid_closure(4, &[1, 1, 1]).unwrap();
        assert_eq!(d.component_count(), 3);
        assert_eq!(d.crossingless_components(), 2);
    }

    #[test]
    fn errors() {
        assert_eq!(Diagram::parse_braid(""), Err(DiagramError::EmptyBraid));
        assert_eq!(Diagram::parse_braid("  "), Err(DiagramError::EmptyBraid));
        assert!(matches!(Diagram::parse_braid("1 0"), Err(DiagramError::BadBraidLetter { letter: 0, .. })));
        assert!(matches!(Diagram::parse_braid("1 x"), Err(DiagramError::Malformed(_))));
        assert_eq!(
            Diagram::braid_closure(2, &[1, 2]),
            Err(DiagramError::BadBraidLetter { letter: 2, strands: 2 })
        );
    }
}
