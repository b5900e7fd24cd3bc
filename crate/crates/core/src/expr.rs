//! Parsed arithmetic expressions in the variables `s` and `y`.

use std::fmt;
use std::sync::Arc;

use exmex::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

const ALLOWED: [&str; 2] = ["s", "y"];

/// An expression such as `10 + 5*sin(2*s)` or `(3*s^2 + 4*s + 2)/(2*(y - 1))`.
#[derive(Clone)]
pub struct Expr {
    text: String,
    flat: Arc<FlatEx<f64>>,
    // position of each variable in the evaluation slice, or None if unused
    s_slot: Option<usize>,
    y_slot: Option<usize>,
}

impl Expr {
    pub fn parse(text: &str) -> Result<Self> {
        let err = |message: String| Error::Expression {
            source_text: text.to_string(),
            message,
        };
        let flat = exmex::parse::<f64>(text).map_err(|e| err(e.to_string()))?;
        let names = flat.var_names();
        if let Some(bad) = names.iter().find(|n| !ALLOWED.contains(&n.as_str())) {
            return Err(err(format!("unknown variable `{bad}`; only s and y are allowed")));
        }
        let slot = |v: &str| names.iter().position(|n| n == v);
        let (s_slot, y_slot) = (slot("s"), slot("y"));
        Ok(Expr {
            text: text.to_string(),
            flat: Arc::new(flat),
            s_slot,
            y_slot,
        })
    }

    pub fn constant(c: f64) -> Self {
        Expr::parse(&format!("{c:?}")).expect("a float literal always parses")
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn uses_y(&self) -> bool {
        self.y_slot.is_some()
    }

    pub fn eval(&self, s: f64, y: f64) -> f64 {
        let mut vars = [0.0; 2];
        if let Some(i) = self.s_slot {
            vars[i] = s;
        }
        if let Some(i) = self.y_slot {
            vars[i] = y;
        }
        let n = self.flat.var_names().len();
        self.flat.eval(&vars[..n]).unwrap_or(f64::NAN)
    }

    /// Closure in `s` alone; `y` is fixed at zero.
    pub fn in_s(&self) -> Arc<dyn Fn(f64) -> f64 + Send + Sync> {
        let e = self.clone();
        Arc::new(move |s| e.eval(s, 0.0))
    }

    /// Closure in `y` alone, written with `y` (or `s`, which is read as `y`).
    pub fn in_y(&self) -> Arc<dyn Fn(f64) -> f64 + Send + Sync> {
        let e = self.clone();
        if e.uses_y() {
            Arc::new(move |y| e.eval(0.0, y))
        } else {
            Arc::new(move |y| e.eval(y, 0.0))
        }
    }

    pub fn in_sy(&self) -> Arc<dyn Fn(f64, f64) -> f64 + Send + Sync> {
        let e = self.clone();
        Arc::new(move |s, y| e.eval(s, y))
    }
}

impl std::str::FromStr for Expr {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        Expr::parse(text)
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Expr").field(&self.text).finish()
    }
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.text == other.text
    }
}

impl Serialize for Expr {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.text)
    }
}

impl<'de> Deserialize<'de> for Expr {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        Expr::parse(&text).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluates_in_both_variables() {
        let e = Expr::parse("(3*s^2 + 4*s + 2)/(2*(y - 1))").unwrap();
        assert!((e.eval(1.0, 2.0) - 4.5).abs() < 1e-15);
        let f = Expr::parse("y*s").unwrap();
        assert_eq!(f.eval(2.0, 3.0), 6.0);
    }

    #[test]
    fn float_division_and_functions() {
        let e = Expr::parse("1/2 + 10 + 5*sin(2*s)").unwrap();
        assert!((e.eval(0.0, 0.0) - 10.5).abs() < 1e-15);
        assert!((Expr::parse("sqrt(y)").unwrap().eval(0.0, 4.0) - 2.0).abs() < 1e-15);
        assert!((Expr::parse("PI").unwrap().eval(0.0, 0.0) - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn rejects_unknown_variables_and_garbage() {
        assert!(matches!(Expr::parse("x + 1"), Err(Error::Expression { .. })));
        assert!(Expr::parse("2 *").is_err());
    }

    #[test]
    fn constants_and_serde() {
        assert_eq!(Expr::constant(-0.25).eval(9.0, 9.0), -0.25);
        let e: Expr = serde_json::from_str("\"s + 1\"").unwrap();
        assert_eq!(e.in_s()(2.0), 3.0);
        assert_eq!(serde_json::to_string(&e).unwrap(), "\"s + 1\"");
    }

    #[test]
    fn single_variable_views() {
        let e = Expr::parse("2*y").unwrap();
        assert_eq!(e.in_y()(3.0), 6.0);
        let g = Expr::parse("2*s").unwrap();
        assert_eq!(g.in_y()(3.0), 6.0);
    }
}
