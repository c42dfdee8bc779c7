use std::collections::HashMap;
use std::fmt;

use super::{Letter, Word};

/// One constructor of a totally symmetric word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Step {
    /// `W ↦ W^m`
    Power(u32),
    /// `W ↦ (W B_i)^m W`
    Pin(u32, usize),
    /// `W ↦ B_i W B_i`
    Conj(usize),
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Power(m) => write!(f, "Power({m})"),
            Step::Pin(m, i) => write!(f, "Pin({m}, {i})"),
            Step::Conj(i) => write!(f, "Conj({i})"),
        }
    }
}

/// Constructors listed outermost first; replaying them innermost first on
/// the letter `X` rebuilds the word.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TotallySymmetricPlan {
    pub steps: Vec<Step>,
}

impl TotallySymmetricPlan {
    pub fn new(steps: Vec<Step>) -> Self {
        Self { steps }
    }

    pub fn replay(&self, k: usize) -> Word {
        let mut w = Word::x(k);
        for step in self.steps.iter().rev() {
            w = match *step {
                Step::Power(m) => w.pow(m),
                Step::Pin(m, i) => {
                    let b = Word::from_letters(k, &[Letter::B(i)]).expect("plan letter within alphabet");
                    w.concat(&b).pow(m).concat(&w)
                }
                Step::Conj(i) => {
                    let b = Word::from_letters(k, &[Letter::B(i)]).expect("plan letter within alphabet");
                    b.concat(&w).concat(&b)
                }
            };
        }
        w
    }

    pub fn max_letter(&self) -> usize {
        self.steps
            .iter()
            .map(|s| match *s {
                Step::Power(_) => 0,
                Step::Pin(_, i) | Step::Conj(i) => i,
            })
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for TotallySymmetricPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.steps.iter().map(Step::to_string).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Finds a constructor plan for `w`, or `None` when the word is not totally
/// symmetric.
///
/// The search works outside in and prefers `Conj`, then `Pin` (largest
/// repetition first), then `Power` (largest power first), backtracking over
/// the alternatives when a branch dead-ends. Coefficient powers `B_i^q` with
/// `q > 1` are only matched as repeated single letters; see
/// [`super::normal_form`] for treating them as fresh letters.
pub fn decompose_totally_symmetric(w: &Word) -> Option<TotallySymmetricPlan> {
    if !w.is_symmetric() {
        return None;
    }
    let letters = w.to_letters();
    let mut memo = HashMap::new();
    search(&letters, &mut memo).map(TotallySymmetricPlan::new)
}

fn search(seq: &[Letter], memo: &mut HashMap<Vec<Letter>, Option<Vec<Step>>>) -> Option<Vec<Step>> {
    if seq == [Letter::X] {
        return Some(Vec::new());
    }
    if let Some(hit) = memo.get(seq) {
        return hit.clone();
    }
    let result = candidates(seq).into_iter().find_map(|(step, inner)| {
        search(&inner, memo).map(|mut rest| {
            rest.insert(0, step);
            rest
        })
    });
    memo.insert(seq.to_vec(), result.clone());
    result
}

fn candidates(seq: &[Letter]) -> Vec<(Step, Vec<Letter>)> {
    let len = seq.len();
    let mut out = Vec::new();
    if len < 2 {
        return out;
    }
    if let (Letter::B(i), Some(&last)) = (seq[0], seq.last()) {
        if last == Letter::B(i) {
            out.push((Step::Conj(i), seq[1..len - 1].to_vec()));
        }
    }
    // (U b)^m U has length (m + 1)|U| + m
    for m in (1..=(len - 1) / 2).rev() {
        if !(len - m).is_multiple_of(m + 1) {
            continue;
        }
        let u = (len - m) / (m + 1);
        let Letter::B(i) = seq[u] else { continue };
        let kernel = &seq[..u];
        let period = u + 1;
        let matches = (0..len).all(|p| {
            let r = p % period;
            if r == u {
                seq[p] == Letter::B(i)
            } else {
                seq[p] == kernel[r]
            }
        });
        if matches {
            out.push((Step::Pin(m as u32, i), kernel.to_vec()));
        }
    }
    for m in (2..=len).rev() {
        if !len.is_multiple_of(m) {
            continue;
        }
        let u = len / m;
        if (0..len).all(|p| seq[p] == seq[p % u]) {
            out.push((Step::Power(m as u32), seq[..u].to_vec()));
        }
    }
    out
}
