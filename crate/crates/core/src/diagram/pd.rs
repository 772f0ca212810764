//! PD-code text format.
//!
//! A diagram is written as a JSON-style list of 4-tuples,
//! `[[1,5,2,4],[3,1,4,6],[5,3,6,2]]`, optionally followed by `+ k` for `k`
//! extra crossingless circles. The empty list `[]` denotes one
//! crossingless circle (the unknot), so `[] + 1` is the 2-component unlink.
//!
//! Orientation is not written down: it is recovered by requiring every arc
//! to leave one slot and enter another. A component that passes only over
//! other strands gets the orientation in which labels increase.

use std::collections::{HashMap, VecDeque};

use super::{Crossing, Diagram, DiagramError, Sign};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Dir {
    In,
    Out,
}

impl Diagram {
    pub fn parse_pd(text: &str) -> Result<Self, DiagramError> {
        let (list, extra) = match text.split_once('+') {
            Some((l, k)) => {
                let k: usize = k
                    .trim()
                    .parse()
                    .map_err(|_| DiagramError::Malformed(format!("bad circle count `{}`", k.trim())))?;
                (l, k)
            }
            None => (text, 0),
        };
        let tuples: Vec<Vec<i64>> =
            serde_json::from_str(list.trim()).map_err(|e| DiagramError::Malformed(e.to_string()))?;
        if tuples.is_empty() {
            return Ok(Self::unlink(1 + extra));
        }
        let mut raw = Vec::with_capacity(tuples.len());
        for t in &tuples {
            let slots: [i64; 4] = t
                .as_slice()
                .try_into()
                .map_err(|_| DiagramError::Malformed(format!("crossing {t:?} does not have 4 entries")))?;
            if slots.iter().any(|&a| a <= 0 || a > u32::MAX as i64) {
                return Err(DiagramError::Malformed(format!("crossing {t:?} has a non-positive label")));
            }
            raw.push(slots.map(|a| a as u32));
        }
        check_labels(&raw)?;
        let signs = infer_orientation(&raw)?;
        let crossings = raw.iter().zip(signs).map(|(s, sign)| Crossing::new(*s, sign)).collect();
        let d = Self::assemble(crossings, extra, &[], false)?;
        d.validate()?;
        Ok(d)
    }

    /// Writes the diagram in the format read by [`Diagram::parse_pd`].
    pub fn to_pd_string(&self) -> String {
        let loops = self.crossingless_components();
        if self.crossings.is_empty() {
            return match loops {
                1 => "[]".to_string(),
                k => format!("[] + {}", k - 1),
            };
        }
        let body: Vec<String> = self
            .crossings
            .iter()
            .map(|c| {
                let [a, b, c, d] = c.slots();
                format!("[{a},{b},{c},{d}]")
            })
            .collect();
        let mut out = format!("[{}]", body.join(","));
        if loops > 0 {
            out.push_str(&format!(" + {loops}"));
        }
        out
    }
}

fn check_labels(raw: &[[u32; 4]]) -> Result<(), DiagramError> {
    let n = 2 * raw.len();
    let mut count = vec![0usize; n + 1];
    for &a in raw.iter().flatten() {
        if a as usize > n {
            return Err(DiagramError::BadLabels { expected: n, detail: format!("label {a} out of range") });
        }
        count[a as usize] += 1;
    }
    match (1..=n).find(|&a| count[a] != 2) {
        Some(a) => Err(DiagramError::BadLabels { expected: n, detail: format!("label {a} appears {} times", count[a]) }),
        None => Ok(()),
    }
}

fn slot_dir(sign: Option<Sign>, slot: usize) -> Option<Dir> {
    match (slot, sign) {
        (0, _) => Some(Dir::In),
        (2, _) => Some(Dir::Out),
        (_, None) => None,
        (1, Some(Sign::Positive)) | (3, Some(Sign::Negative)) => Some(Dir::Out),
        _ => Some(Dir::In),
    }
}

/// Sign that makes `slot` (1 or 3) point in direction `dir`.
fn sign_for(slot: usize, dir: Dir) -> Sign {
    match (slot, dir) {
        (1, Dir::Out) | (3, Dir::In) => Sign::Positive,
        _ => Sign::Negative,
    }
}

fn infer_orientation(raw: &[[u32; 4]]) -> Result<Vec<Sign>, DiagramError> {
    let mut occ: HashMap<u32, Vec<(usize, usize)>> = HashMap::new();
    for (x, t) in raw.iter().enumerate() {
        for (s, &a) in t.iter().enumerate() {
            occ.entry(a).or_default().push((x, s));
        }
    }
    let mut signs: Vec<Option<Sign>> = vec![None; raw.len()];
    let mut queue: VecDeque<u32> = occ.keys().copied().collect();
    loop {
        while let Some(a) = queue.pop_front() {
            let [(x1, s1), (x2, s2)] = [occ[&a][0], occ[&a][1]];
            match (slot_dir(signs[x1], s1), slot_dir(signs[x2], s2)) {
                (Some(d1), Some(d2)) if d1 == d2 => {
                    return Err(DiagramError::InconsistentOrientation(format!(
                        "arc {a} would be {} at both ends",
                        if d1 == Dir::In { "incoming" } else { "outgoing" }
                    )));
                }
                (Some(d1), None) => {
                    let opposite = if d1 == Dir::In { Dir::Out } else { Dir::In };
                    signs[x2] = Some(sign_for(s2, opposite));
                    queue.extend(raw[x2]);
                }
                (None, Some(d2)) => {
                    let opposite = if d2 == Dir::In { Dir::Out } else { Dir::In };
                    signs[x1] = Some(sign_for(s1, opposite));
                    queue.extend(raw[x1]);
                }
                _ => {}
            }
        }
        // A strand that is never under: orient it so that labels increase.
        let Some(x) = signs.iter().position(Option::is_none) else { break };
        let [_, b, _, d] = raw[x];
        signs[x] = Some(if b == d + 1 || d > b + 1 { Sign::Positive } else { Sign::Negative });
        queue.extend(raw[x]);
    }
    Ok(signs.into_iter().map(|s| s.expect("every crossing oriented")).collect())
}
