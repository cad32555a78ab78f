use std::fmt;

use crate::error::{Error, Result};

/// Matrix size `(m, n)` of `Pol(Mat_mn)_q`; there are `m * n` generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Shape {
    pub m: usize,
    pub n: usize,
}

impl Shape {
    pub fn new(m: usize, n: usize) -> Result<Shape> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidParameter(format!("matrix size must be positive, got ({m},{n})")));
        }
        if m * n > 64 {
            return Err(Error::InvalidParameter(format!("matrix size ({m},{n}) is beyond desk scale")));
        }
        Ok(Shape { m, n })
    }

    /// Number of generators `m * n`.
    pub fn gens(&self) -> usize {
        self.m * self.n
    }

    /// `N = m + n`.
    pub fn big_n(&self) -> usize {
        self.m + self.n
    }

    /// Position of `z_a^α` in the canonical order, which is column-major:
    /// `z_1^1, z_1^2, ..., z_1^m, z_2^1, ..., z_n^m`.
    pub fn index(&self, col: usize, row: usize) -> usize {
        debug_assert!((1..=self.n).contains(&col) && (1..=self.m).contains(&row));
        (col - 1) * self.m + (row - 1)
    }

    /// `(column a, row α)` of the generator at canonical position `g`.
    pub fn col_row(&self, g: usize) -> (usize, usize) {
        (g / self.m + 1, g % self.m + 1)
    }

    pub fn check(&self, other: Shape) -> Result<()> {
        if *self == other {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(self.m, self.n, other.m, other.n))
        }
    }
}

/// A generator `z_a^α` (row `α`, column `a`), or its adjoint when `starred`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GenIndex {
    pub row: usize,
    pub col: usize,
    pub starred: bool,
}

impl GenIndex {
    pub fn z(col: usize, row: usize) -> GenIndex {
        GenIndex { row, col, starred: false }
    }

    pub fn zs(col: usize, row: usize) -> GenIndex {
        GenIndex { row, col, starred: true }
    }

    pub fn validate(&self, shape: Shape) -> Result<()> {
        if (1..=shape.m).contains(&self.row) && (1..=shape.n).contains(&self.col) {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange(format!(
                "{self} is outside a {}x{} matrix",
                shape.m, shape.n
            )))
        }
    }

    pub(crate) fn letter(&self, shape: Shape) -> Letter {
        Letter { gen: shape.index(self.col, self.row), star: self.starred }
    }
}

/// Token syntax `z[a,α]` / `zs[a,α]`, column first.
impl fmt::Display for GenIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.starred { "zs" } else { "z" };
        write!(f, "{tag}[{},{}]", self.col, self.row)
    }
}

impl std::str::FromStr for GenIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<GenIndex> {
        let t = s.trim();
        let bad = || Error::Parse(format!("bad generator token `{t}`, expected z[a,α] or zs[a,α]"));
        let (starred, rest) = if let Some(r) = t.strip_prefix("zs[") {
            (true, r)
        } else if let Some(r) = t.strip_prefix("z[") {
            (false, r)
        } else {
            return Err(bad());
        };
        let inner = rest.strip_suffix(']').ok_or_else(bad)?;
        let (a, alpha) = inner.split_once(',').ok_or_else(bad)?;
        let col = a.trim().parse().map_err(|_| bad())?;
        let row = alpha.trim().parse().map_err(|_| bad())?;
        Ok(GenIndex { row, col, starred })
    }
}

/// A free (not yet normal-ordered) word in the generators.
pub type Word = Vec<GenIndex>;

/// Parses a whitespace-separated list of generator tokens.
pub fn parse_word(shape: Shape, s: &str) -> Result<Word> {
    let word: Word = s.split_whitespace().map(str::parse).collect::<Result<_>>()?;
    for g in &word {
        g.validate(shape)?;
    }
    Ok(word)
}

/// Internal letter: canonical generator position plus a star flag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Letter {
    pub gen: usize,
    pub star: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order_is_column_major() {
        let s = Shape::new(2, 3).unwrap();
        assert_eq!(s.index(1, 1), 0);
        assert_eq!(s.index(1, 2), 1);
        assert_eq!(s.index(2, 1), 2);
        assert_eq!(s.col_row(5), (3, 2));
    }

    #[test]
    fn token_round_trip() {
        let s = Shape::new(2, 2).unwrap();
        let w = parse_word(s, "zs[1,2] z[2,1]").unwrap();
        assert_eq!(w, vec![GenIndex::zs(1, 2), GenIndex::z(2, 1)]);
        assert_eq!(w[0].to_string(), "zs[1,2]");
        assert!(parse_word(s, "z[3,1]").is_err());
        assert!(parse_word(s, "x[1,1]").is_err());
    }
}
