//! Pair-matched words and the linear forms they induce on circuit vertices.
//!
//! A word of length `2k` labels the edges `(π(i-1), π(i))`, `i = 1..=2k`, of
//! a circuit; equal letters mean equal link values. Positions are 1-based,
//! vertices run over `0..=2k`.

use crate::error::{Error, Result};
use crate::matgen::LinkKind;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Largest supported half-length; `13!! = 135135` words.
pub const MAX_WORD_K: usize = 7;

/// Role of one position in a word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    /// First occurrence of a letter; the vertex is the `slot`-th generating
    /// coordinate (slot 0 is vertex 0).
    Open { slot: usize },
    /// Second occurrence, matched with the earlier position `partner`.
    Close { partner: usize },
}

/// Canonical pair-matched word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<u8>,
    // mate[p - 1] is the matched position of 1-based position p
    mate: Vec<usize>,
}

impl Word {
    /// Build from 0-based letter ids, checking pair matching and canonical
    /// first-occurrence order.
    pub fn from_letters(letters: Vec<u8>) -> Result<Self> {
        if letters.is_empty() || !letters.len().is_multiple_of(2) {
            return Err(Error::invalid("a pair-matched word has positive even length"));
        }
        let mut first: Vec<Option<usize>> = Vec::new();
        let mut mate = vec![0usize; letters.len()];
        for (idx, &l) in letters.iter().enumerate() {
            let l = l as usize;
            let pos = idx + 1;
            if l > first.len() {
                return Err(Error::invalid("letters must first appear in alphabetical order"));
            }
            if l == first.len() {
                first.push(Some(pos));
            } else {
                match first[l].take() {
                    Some(p) => {
                        mate[p - 1] = pos;
                        mate[idx] = p;
                    }
                    None => return Err(Error::invalid("every letter must appear exactly twice")),
                }
            }
        }
        if first.iter().any(Option::is_some) {
            return Err(Error::invalid("every letter must appear exactly twice"));
        }
        Ok(Word { letters, mate })
    }

    /// `2k`.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Number of distinct letters.
    pub fn k(&self) -> usize {
        self.letters.len() / 2
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    /// Matched position of the 1-based position `pos`.
    pub fn mate(&self, pos: usize) -> usize {
        self.mate[pos - 1]
    }

    pub fn is_first_occurrence(&self, pos: usize) -> bool {
        self.mate(pos) > pos
    }

    /// Roles of positions `1..=2k`, in order.
    pub fn steps(&self) -> Vec<Step> {
        let mut slot = 0;
        (1..=self.len())
            .map(|p| {
                if self.is_first_occurrence(p) {
                    slot += 1;
                    Step::Open { slot }
                } else {
                    Step::Close { partner: self.mate(p) }
                }
            })
            .collect()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &l in &self.letters {
            write!(f, "{}", (b'a' + l) as char)?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .bytes()
            .map(|b| {
                if b.is_ascii_lowercase() {
                    Ok(b - b'a')
                } else {
                    Err(Error::invalid(format!("invalid letter in word '{s}'")))
                }
            })
            .collect::<Result<Vec<u8>>>()?;
        Word::from_letters(letters)
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// All canonical pair-matched words of length `2k` in lexicographic order.
pub fn enumerate_pair_matched_words(k: usize) -> Result<Vec<Word>> {
    if k == 0 {
        return Err(Error::invalid("word half-length must be at least 1"));
    }
    if k > MAX_WORD_K {
        return Err(Error::ResourceLimit(format!(
            "pair-matched words are enumerated up to k = {MAX_WORD_K}, requested {k}"
        )));
    }
    let mut out = Vec::new();
    let mut letters = Vec::with_capacity(2 * k);
    let mut open = Vec::with_capacity(k);
    extend(k, 0, &mut letters, &mut open, &mut out);
    Ok(out)
}

fn extend(k: usize, used: u8, letters: &mut Vec<u8>, open: &mut Vec<u8>, out: &mut Vec<Word>) {
    let remaining = 2 * k - letters.len();
    if remaining == 0 {
        out.push(Word::from_letters(letters.clone()).expect("enumeration yields valid words"));
        return;
    }
    // closing an open letter: smaller letters first keeps lexicographic order
    let mut candidates = open.clone();
    candidates.sort_unstable();
    for l in candidates {
        let at = open.iter().position(|&o| o == l).unwrap();
        open.remove(at);
        letters.push(l);
        extend(k, used, letters, open, out);
        letters.pop();
        open.insert(at, l);
    }
    if (used as usize) < k && open.len() + 1 < remaining {
        open.push(used);
        letters.push(used);
        extend(k, used + 1, letters, open, out);
        letters.pop();
        open.pop();
    }
}

/// Each letter occupies one odd and one even position.
pub fn is_symmetric(w: &Word) -> bool {
    (1..=w.len()).all(|p| (p + w.mate(p)) % 2 == 1)
}

/// `S = {0} ∪ {first occurrence positions}`, ascending.
pub fn generating_vertices(w: &Word) -> Vec<usize> {
    std::iter::once(0)
        .chain((1..=w.len()).filter(|&p| w.is_first_occurrence(p)))
        .collect()
}

/// Integer affine combination of the generating coordinates `x_S`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LinearForm {
    pub coeffs: Vec<i64>,
}

impl LinearForm {
    fn unit(dim: usize, slot: usize) -> Self {
        let mut coeffs = vec![0; dim];
        coeffs[slot] = 1;
        LinearForm { coeffs }
    }

    fn combine(a: &LinearForm, b: &LinearForm, c: &LinearForm) -> Self {
        // a + b - c
        LinearForm {
            coeffs: a.coeffs.iter().zip(&b.coeffs).zip(&c.coeffs).map(|((a, b), c)| a + b - c).collect(),
        }
    }

    pub fn coefficient_sum(&self) -> i64 {
        self.coeffs.iter().sum()
    }

    pub fn evaluate(&self, xs: &[f64]) -> f64 {
        self.coeffs.iter().zip(xs).map(|(&c, &x)| c as f64 * x).sum()
    }

    pub fn evaluate_int(&self, xs: &[i64]) -> i64 {
        self.coeffs.iter().zip(xs).map(|(&c, &x)| c * x).sum()
    }

    pub fn is_coordinate(&self, slot: usize) -> bool {
        self.coeffs.iter().enumerate().all(|(i, &c)| c == i64::from(i == slot))
    }
}

/// Vertex forms `L_0..L_{2k}` for a word under one link kind.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordForms {
    /// Generating vertices, the coordinate order of every form.
    pub support: Vec<usize>,
    pub forms: Vec<LinearForm>,
    /// `L_{2k} ≡ x_0`.
    pub closure: bool,
}

/// Derive `L_i` from the matched-pair constraints.
///
/// For a second occurrence `i` matched with `j < i`:
/// Toeplitz (opposite slopes) `L_i = L_{i-1} + L_{j-1} - L_j`;
/// Hankel (equal sums) `L_i = L_{j-1} + L_j - L_{i-1}`.
pub fn linear_forms(w: &Word, kind: LinkKind) -> WordForms {
    let support = generating_vertices(w);
    let dim = support.len();
    let mut forms: Vec<LinearForm> = Vec::with_capacity(w.len() + 1);
    forms.push(LinearForm::unit(dim, 0));
    for (idx, step) in w.steps().into_iter().enumerate() {
        let i = idx + 1;
        let form = match step {
            Step::Open { slot } => LinearForm::unit(dim, slot),
            Step::Close { partner: j } => match kind {
                LinkKind::T => LinearForm::combine(&forms[i - 1], &forms[j - 1], &forms[j]),
                LinkKind::H => LinearForm::combine(&forms[j - 1], &forms[j], &forms[i - 1]),
            },
        };
        forms.push(form);
    }
    let closure = forms[w.len()].is_coordinate(0);
    WordForms { support, forms, closure }
}
