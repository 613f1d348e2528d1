use std::fmt;

use crate::error::{Error, Result};
use crate::precision::{PrecisionContext, Scalar};

/// Explicit Runge-Kutta coefficients.
///
/// `rows[i]` holds `a_{i,0..i}`, so the strictly lower triangle is all that
/// is stored and explicitness holds by construction.
#[derive(Clone, PartialEq)]
pub struct ButcherTableau {
    name: String,
    alpha: Vec<Scalar>,
    rows: Vec<Vec<Scalar>>,
}

/// Names accepted by [`ButcherTableau::shipped`].
pub const SHIPPED: [&str; 6] = ["euler", "heun2", "kutta3", "heun3", "ralston3", "ssprk3"];

/// Euler and four third-order methods, the set compared in the surface plots.
pub const SURFACE_SET: [&str; 5] = ["euler", "kutta3", "heun3", "ralston3", "ssprk3"];

impl ButcherTableau {
    /// Builds and validates a tableau: `rows` must have `s` entries of
    /// lengths `0, 1, ..., s-1` and the weights must sum to one.
    pub fn new(name: impl Into<String>, alpha: Vec<Scalar>, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let name = name.into();
        let s = alpha.len();
        if s == 0 {
            return Err(Error::InvalidTableau(format!("{name}: no stages")));
        }
        if rows.len() != s {
            return Err(Error::InvalidTableau(format!(
                "{name}: {s} weights but {} coefficient rows",
                rows.len()
            )));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != i {
                return Err(Error::InvalidTableau(format!(
                    "{name}: row {} must have {i} entries, found {}",
                    i + 1,
                    row.len()
                )));
            }
        }
        let mut total = alpha[0].constant(0, 1);
        for w in &alpha {
            total += w;
        }
        let defect = (total - 1).abs();
        if defect > alpha[0].tolerance() {
            return Err(Error::InvalidTableau(format!(
                "{name}: weights sum to 1 + {defect:?}, not 1"
            )));
        }
        Ok(Self { name, alpha, rows })
    }

    /// Parses weights and lower-triangular rows given as decimal or `p/q`
    /// strings at the context's precision.
    pub fn from_strs(
        ctx: &PrecisionContext,
        name: &str,
        alpha: &[&str],
        rows: &[&[&str]],
    ) -> Result<Self> {
        let parse_all = |cells: &[&str]| cells.iter().map(|c| ctx.parse(c)).collect::<Result<Vec<_>>>();
        let alpha = parse_all(alpha)?;
        let mut full_rows = vec![Vec::new()];
        for row in rows {
            full_rows.push(parse_all(row)?);
        }
        Self::new(name, alpha, full_rows)
    }

    /// One of the built-in methods listed in [`SHIPPED`].
    pub fn shipped(ctx: &PrecisionContext, name: &str) -> Result<Self> {
        let key = name.to_ascii_lowercase();
        let (alpha, rows): (&[&str], &[&[&str]]) = match key.as_str() {
            "euler" => (&["1"], &[]),
            "heun2" => (&["1/2", "1/2"], &[&["1"]]),
            "kutta3" => (&["1/6", "2/3", "1/6"], &[&["1/2"], &["-1", "2"]]),
            "heun3" => (&["1/4", "0", "3/4"], &[&["1/3"], &["0", "2/3"]]),
            "ralston3" => (&["2/9", "1/3", "4/9"], &[&["1/2"], &["0", "3/4"]]),
            "ssprk3" => (&["1/6", "1/6", "2/3"], &[&["1"], &["1/4", "1/4"]]),
            _ => {
                return Err(Error::InvalidTableau(format!(
                    "unknown tableau {name:?}; expected one of {}",
                    SHIPPED.join(", ")
                )))
            }
        };
        Self::from_strs(ctx, &key, alpha, rows)
    }

    /// Reads the plain-text format: the stage count `s`, then the `s`
    /// weights, then rows 2..=s of the lower triangle (`i-1` entries each).
    /// Entries are separated by whitespace or commas; `#` starts a comment.
    pub fn parse_text(ctx: &PrecisionContext, name: &str, text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty());
        let bad = |msg: String| Error::InvalidTableau(format!("{name}: {msg}"));
        let split = |l: &str| -> Vec<String> {
            l.split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(str::to_string)
                .collect()
        };
        let s: usize = lines
            .next()
            .ok_or_else(|| bad("empty file".into()))?
            .parse()
            .map_err(|_| bad("first line must be the stage count".into()))?;
        let alpha = split(lines.next().ok_or_else(|| bad("missing weights".into()))?);
        if alpha.len() != s {
            return Err(bad(format!("expected {s} weights, found {}", alpha.len())));
        }
        let mut rows = Vec::new();
        for i in 1..s {
            let row = split(lines.next().ok_or_else(|| bad(format!("missing row {}", i + 1)))?);
            rows.push(row);
        }
        if let Some(extra) = lines.next() {
            return Err(bad(format!("unexpected trailing line {extra:?}")));
        }
        let alpha: Vec<&str> = alpha.iter().map(String::as_str).collect();
        let rows: Vec<Vec<&str>> = rows.iter().map(|r| r.iter().map(String::as_str).collect()).collect();
        let rows: Vec<&[&str]> = rows.iter().map(Vec::as_slice).collect();
        Self::from_strs(ctx, name, &alpha, &rows)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn stages(&self) -> usize {
        self.alpha.len()
    }

    pub fn alpha(&self) -> &[Scalar] {
        &self.alpha
    }

    /// `a_{ij}` with zero-based indices; zero on and above the diagonal.
    pub fn a(&self, i: usize, j: usize) -> Scalar {
        if j < i {
            self.rows[i][j].clone()
        } else {
            self.alpha[0].constant(0, 1)
        }
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.rows[i]
    }

    /// Row sum `A_i = Σ_j a_{ij}`.
    pub fn row_sum(&self, i: usize) -> Scalar {
        let mut total = self.alpha[0].constant(0, 1);
        for a in &self.rows[i] {
            total += a;
        }
        total
    }
}

impl fmt::Debug for ButcherTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ButcherTableau")
            .field("name", &self.name)
            .field("stages", &self.stages())
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::fold_rk_reduced_gap;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(40).unwrap()
    }

    #[test]
    fn shipped_tableaux_are_consistent() {
        let c = ctx();
        for name in SHIPPED {
            let t = ButcherTableau::shipped(&c, name).unwrap();
            assert_eq!(t.name(), name);
        }
        let k = ButcherTableau::shipped(&c, "Kutta3").unwrap();
        assert_eq!(k.stages(), 3);
        assert_eq!(k.a(2, 0), -1);
        assert_eq!(k.a(1, 1), 0);
        assert_eq!(k.row_sum(2), 1);
    }

    #[test]
    fn rejects_inconsistent_weights_and_shapes() {
        let c = ctx();
        assert!(ButcherTableau::from_strs(&c, "bad", &["1/2", "1/3"], &[&["1"]]).is_err());
        assert!(ButcherTableau::from_strs(&c, "bad", &["1/2", "1/2"], &[&["1", "2"]]).is_err());
        assert!(ButcherTableau::shipped(&c, "rk4-ish").is_err());
    }

    #[test]
    fn parses_text_format() {
        let c = ctx();
        let text = "# Kutta\n3\n1/6 2/3 1/6\n0.5\n-1, 2 # last row\n";
        let t = ButcherTableau::parse_text(&c, "file", text).unwrap();
        assert!(t == ButcherTableau::from_strs(&c, "file", &["1/6", "2/3", "1/6"], &[&["1/2"], &["-1", "2"]]).unwrap());
        assert!(ButcherTableau::parse_text(&c, "f", "2\n1/2 1/2\n").is_err());
        assert!(ButcherTableau::parse_text(&c, "f", "1\n1\n3\n").is_err());
    }

    #[test]
    fn reduced_fold_gap_examples() {
        let c = ctx();
        let h = c.parse("0.1").unwrap();
        let heun = ButcherTableau::shipped(&c, "heun2").unwrap();
        let kutta = ButcherTableau::shipped(&c, "kutta3").unwrap();
        assert!(!fold_rk_reduced_gap(&heun, &c.parse("-0.05").unwrap(), &h).unwrap());
        assert!(fold_rk_reduced_gap(&heun, &c.zero(), &h).unwrap());
        assert!(fold_rk_reduced_gap(&kutta, &c.parse("-0.06").unwrap(), &h).unwrap());
        let euler = ButcherTableau::shipped(&c, "euler").unwrap();
        assert!(fold_rk_reduced_gap(&euler, &c.zero(), &h).is_err());
    }
}
