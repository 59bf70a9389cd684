use std::fmt;

use crate::{Error, Result};

/// One output coordinate of a box map `□^m → □^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coord {
    Zero,
    One,
    /// The `j`-th input coordinate (0-based).
    Var(u8),
}

/// A morphism `□^src → □^n` of the box category without connections:
/// each output coordinate is a constant or an input coordinate, with input
/// coordinates used at most once and in increasing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoxWord {
    src: usize,
    coords: Vec<Coord>,
}

impl BoxWord {
    pub fn new(src: usize, coords: Vec<Coord>) -> Result<BoxWord> {
        let mut last: Option<u8> = None;
        for c in &coords {
            if let Coord::Var(j) = *c {
                if j as usize >= src || last.is_some_and(|l| l >= j) {
                    return Err(Error::input("box map variables must be distinct, increasing and in range"));
                }
                last = Some(j);
            }
        }
        Ok(BoxWord { src, coords })
    }

    pub fn identity(n: usize) -> BoxWord {
        BoxWord { src: n, coords: (0..n as u8).map(Coord::Var).collect() }
    }

    /// `δ_{i,ε}: □^{n-1} → □^n`, inserting `ε` at position `i` (0-based).
    pub fn face(n: usize, i: usize, eps: u8) -> BoxWord {
        assert!(i < n && eps < 2, "face index out of range");
        let mut coords: Vec<Coord> = (0..n as u8 - 1).map(Coord::Var).collect();
        coords.insert(i, if eps == 0 { Coord::Zero } else { Coord::One });
        BoxWord { src: n - 1, coords }
    }

    /// `σ_i: □^n → □^{n-1}`, forgetting coordinate `i` (0-based).
    pub fn degeneracy(n: usize, i: usize) -> BoxWord {
        assert!(i < n, "degeneracy index out of range");
        BoxWord { src: n, coords: (0..n as u8).filter(|&j| j as usize != i).map(Coord::Var).collect() }
    }

    /// Projection `□^n → □^k` keeping the coordinates in `keep`.
    pub fn projection(n: usize, keep: u32) -> BoxWord {
        BoxWord { src: n, coords: (0..n as u8).filter(|&j| keep >> j & 1 == 1).map(Coord::Var).collect() }
    }

    pub fn src(&self) -> usize {
        self.src
    }

    pub fn dst(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Coord] {
        &self.coords
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &BoxWord) -> BoxWord {
        assert_eq!(self.src, inner.dst(), "box maps do not compose");
        let coords = self
            .coords
            .iter()
            .map(|c| match *c {
                Coord::Var(j) => inner.coords[j as usize],
                k => k,
            })
            .collect();
        BoxWord { src: inner.src, coords }
    }

    /// Input coordinates that are used.
    pub fn used(&self) -> u32 {
        self.coords.iter().fold(0, |m, c| match c {
            Coord::Var(j) => m | 1 << j,
            _ => m,
        })
    }

    /// Factorisation `self = face ∘ projection(src, used)` with `face` injective.
    pub fn factor(&self) -> (BoxWord, u32) {
        let used = self.used();
        let rank: Vec<u8> = (0..self.src as u8).map(|j| (used & ((1u32 << j) - 1)).count_ones() as u8).collect();
        let coords = self
            .coords
            .iter()
            .map(|c| match *c {
                Coord::Var(j) => Coord::Var(rank[j as usize]),
                k => k,
            })
            .collect();
        (BoxWord { src: used.count_ones() as usize, coords }, used)
    }

    pub fn is_injective(&self) -> bool {
        self.used().count_ones() as usize == self.src
    }

    /// Parses a word of elementary operators in application order, e.g.
    /// `"s2 d1,0"` (first forget axis 2, then insert 0 at axis 1).
    pub fn parse(word: &str, src: usize) -> Result<BoxWord> {
        let mut cur = BoxWord::identity(src);
        for tok in word.split_whitespace() {
            let bad = || Error::input(format!("bad box operator '{tok}'"));
            let op = if let Some(rest) = tok.strip_prefix('s') {
                let i: usize = rest.parse().map_err(|_| bad())?;
                if i == 0 || i > cur.dst() {
                    return Err(bad());
                }
                BoxWord::degeneracy(cur.dst(), i - 1)
            } else if let Some(rest) = tok.strip_prefix('d') {
                let (i, e) = rest.split_once(',').ok_or_else(bad)?;
                let i: usize = i.parse().map_err(|_| bad())?;
                let e: u8 = e.parse().map_err(|_| bad())?;
                if i == 0 || i > cur.dst() + 1 || e > 1 {
                    return Err(bad());
                }
                BoxWord::face(cur.dst() + 1, i - 1, e)
            } else {
                return Err(bad());
            };
            cur = op.compose(&cur);
        }
        Ok(cur)
    }
}

/// Normal form: degeneracies (largest axis first), then faces (smallest axis first),
/// in application order; the identity prints as the empty word.
impl fmt::Display for BoxWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let used = self.used();
        let mut ops: Vec<String> =
            (0..self.src).rev().filter(|&j| used >> j & 1 == 0).map(|j| format!("s{}", j + 1)).collect();
        for (i, c) in self.coords.iter().enumerate() {
            match c {
                Coord::Zero => ops.push(format!("d{},0", i + 1)),
                Coord::One => ops.push(format!("d{},1", i + 1)),
                Coord::Var(_) => {}
            }
        }
        f.write_str(&ops.join(" "))
    }
}

/// Degeneracy word for the cube `σ^*` that forgets the axes of `[0, n)` missing from `keep`.
pub fn degeneracy_word(n: usize, keep: u32) -> String {
    BoxWord::projection(n, keep).to_string()
}

pub fn parse_degeneracy_word(word: &str, n: usize) -> Result<u32> {
    let w = BoxWord::parse(word, n)?;
    if w.coords.iter().any(|c| !matches!(c, Coord::Var(_))) {
        return Err(Error::input(format!("'{word}' is not a degeneracy word")));
    }
    Ok(w.used())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_form_round_trips() {
        let w = BoxWord::face(3, 1, 1).compose(&BoxWord::degeneracy(3, 0));
        let s = w.to_string();
        assert_eq!(s, "s1 d2,1");
        assert_eq!(BoxWord::parse(&s, 3).unwrap(), w);
    }

    #[test]
    fn identity_is_a_unit() {
        let w = BoxWord::parse("s3 d1,0", 3).unwrap();
        assert_eq!(BoxWord::identity(w.dst()).compose(&w), w);
        assert_eq!(w.compose(&BoxWord::identity(3)), w);
        assert_eq!(BoxWord::identity(2).to_string(), "");
    }

    #[test]
    fn cubical_identities() {
        // δ_j δ_i = δ_i δ_{j-1} for i < j
        for n in 2..5 {
            for i in 0..n {
                for j in i + 1..n {
                    for (a, b) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                        let lhs = BoxWord::face(n, j, b).compose(&BoxWord::face(n - 1, i, a));
                        let rhs = BoxWord::face(n, i, a).compose(&BoxWord::face(n - 1, j - 1, b));
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn factor_splits_off_degeneracies() {
        let w = BoxWord::parse("s2 d1,1", 3).unwrap();
        let (face, used) = w.factor();
        assert_eq!(used, 0b101);
        assert_eq!(face.compose(&BoxWord::projection(3, used)), w);
        assert!(face.is_injective());
    }

    #[test]
    fn degeneracy_words() {
        assert_eq!(degeneracy_word(3, 0b001), "s3 s2");
        assert_eq!(parse_degeneracy_word("s3 s2", 3).unwrap(), 0b001);
        assert!(parse_degeneracy_word("d1,0", 0).is_err());
    }
}
