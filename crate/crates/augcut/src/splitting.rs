//! Cardinality-based splitting functions.
//!
//! A splitting function assigns a penalty to each way of separating the
//! nodes of a hyperedge. Everything here is *cardinality-based*: the penalty
//! depends only on how many nodes land on each side. The symmetric class
//! ([`ScbFunction`]) is zero on uncut configurations and depends only on the
//! small-side count; the generalized class ([`GscbFunction`]) drops symmetry
//! and may be nonzero at the endpoints, which is what decomposable
//! submodular components look like.

use crate::{Error, Result, REL_VALIDATE};

/// Named penalty families plus free-form custom vectors.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// `i * (k - i)` — the clique expansion penalty.
    Clique,
    /// `min(i, k - i)` — the star expansion penalty.
    Linear,
    /// `min(i, k - i, delta)` with `delta >= 1`.
    DeltaLinear(f64),
    /// `sqrt(min(i, k - i))`.
    Sqrt,
    /// `min(i, k - i)^p` with `p` in `(0, 1]`.
    Power(f64),
    /// `1` whenever the hyperedge is cut.
    AllOrNothing,
    /// Explicit penalties for small-side counts `0..=floor(k/2)`.
    Custom(Vec<f64>),
}

impl Family {
    fn name(&self) -> &'static str {
        match self {
            Family::Clique => "clique",
            Family::Linear => "linear",
            Family::DeltaLinear(_) => "dlinear",
            Family::Sqrt => "sqrt",
            Family::Power(_) => "power",
            Family::AllOrNothing => "aon",
            Family::Custom(_) => "custom",
        }
    }
}

/// A splitting function specification: a family plus a nonnegative weight.
#[derive(Debug, Clone, PartialEq)]
pub struct SplittingSpec {
    pub family: Family,
    pub weight: f64,
}

impl SplittingSpec {
    pub fn new(family: Family, weight: f64) -> Result<Self> {
        if !(weight >= 0.0) || !weight.is_finite() {
            return Err(Error::Spec(format!("weight must be nonnegative, got {weight}")));
        }
        match &family {
            Family::DeltaLinear(d) => {
                if !(*d >= 1.0) || !d.is_finite() {
                    return Err(Error::Spec(format!("dlinear requires delta >= 1, got {d}")));
                }
            }
            Family::Power(p) => {
                if !(*p > 0.0 && *p <= 1.0) {
                    return Err(Error::Spec(format!("power requires p in (0,1], got {p}")));
                }
            }
            Family::Custom(w) => {
                if w.is_empty() {
                    return Err(Error::Spec("custom penalty list is empty".into()));
                }
                // Full SCB validation happens at materialization, once k is
                // known; entries must at least be finite.
                if let Some(bad) = w.iter().position(|v| !v.is_finite()) {
                    return Err(Error::Spec(format!("custom penalty {bad} is not finite")));
                }
            }
            _ => {}
        }
        Ok(SplittingSpec { family, weight })
    }

    pub fn unweighted(family: Family) -> Result<Self> {
        Self::new(family, 1.0)
    }

    /// Same spec with weight 1, used as a cover-cache key.
    pub fn unit(&self) -> SplittingSpec {
        SplittingSpec { family: self.family.clone(), weight: 1.0 }
    }

    /// Penalty for putting `i` of `k` nodes on one side.
    ///
    /// Symmetric by construction: the effective argument is `min(i, k - i)`.
    pub fn evaluate(&self, k: usize, i: usize) -> Result<f64> {
        if i > k {
            return Err(Error::Domain(format!("side count {i} exceeds hyperedge size {k}")));
        }
        let j = i.min(k - i);
        let jf = j as f64;
        let raw = match &self.family {
            Family::Clique => (i as f64) * ((k - i) as f64),
            Family::Linear => jf,
            Family::DeltaLinear(d) => jf.min(*d),
            Family::Sqrt => jf.sqrt(),
            Family::Power(p) => jf.powf(*p),
            Family::AllOrNothing => {
                if j > 0 {
                    1.0
                } else {
                    0.0
                }
            }
            Family::Custom(w) => {
                let r = k / 2;
                if w.len() != r + 1 {
                    return Err(Error::Spec(format!(
                        "custom penalty list has length {}, expected {} for k = {k}",
                        w.len(),
                        r + 1
                    )));
                }
                w[j]
            }
        };
        Ok(self.weight * raw)
    }

    /// Materializes the symmetric penalty sequence `w(0..=floor(k/2))`.
    pub fn materialize_scb(&self, k: usize) -> Result<ScbFunction> {
        if k == 0 {
            return Err(Error::Domain("hyperedge size must be at least 1".into()));
        }
        let r = k / 2;
        let mut w = Vec::with_capacity(r + 1);
        for i in 0..=r {
            w.push(self.evaluate(k, i)?);
        }
        ScbFunction::new(w)
    }

    /// Mirrors the symmetric penalties over the whole range `0..=k`, yielding
    /// the generalized form used by the s-t reduction.
    pub fn materialize_full(&self, k: usize) -> Result<GscbFunction> {
        if k == 0 {
            return Err(Error::Domain("hyperedge size must be at least 1".into()));
        }
        let mut w = Vec::with_capacity(k + 1);
        for i in 0..=k {
            w.push(self.evaluate(k, i)?);
        }
        GscbFunction::new(w)
    }

    /// Parses the spec grammar:
    /// `[weight <c>] clique | linear | dlinear <d> | sqrt | power <p> | aon |
    /// custom <w0> ... <wr>`. Consumes the whole token slice.
    pub fn parse_tokens(tokens: &[&str]) -> std::result::Result<Self, String> {
        let mut toks = tokens;
        let mut weight = 1.0;
        if toks.first() == Some(&"weight") {
            if toks.len() < 2 {
                return Err("`weight` needs a value".into());
            }
            weight = toks[1].parse::<f64>().map_err(|_| format!("bad weight `{}`", toks[1]))?;
            toks = &toks[2..];
        }
        let family = match toks.first() {
            None => return Err("missing splitting family".into()),
            Some(&"clique") => {
                expect_len(toks, 1)?;
                Family::Clique
            }
            Some(&"linear") => {
                expect_len(toks, 1)?;
                Family::Linear
            }
            Some(&"sqrt") => {
                expect_len(toks, 1)?;
                Family::Sqrt
            }
            Some(&"aon") => {
                expect_len(toks, 1)?;
                Family::AllOrNothing
            }
            Some(&"dlinear") => {
                expect_len(toks, 2)?;
                Family::DeltaLinear(parse_num(toks[1])?)
            }
            Some(&"power") => {
                expect_len(toks, 2)?;
                Family::Power(parse_num(toks[1])?)
            }
            Some(&"custom") => {
                let vals: std::result::Result<Vec<f64>, String> =
                    toks[1..].iter().map(|t| parse_num(t)).collect();
                Family::Custom(vals?)
            }
            Some(other) => return Err(format!("unknown splitting family `{other}`")),
        };
        SplittingSpec::new(family, weight).map_err(|e| e.to_string())
    }

    /// Emits the spec in the same grammar `parse_tokens` reads.
    pub fn to_tokens(&self) -> String {
        let mut s = String::new();
        if self.weight != 1.0 {
            s.push_str(&format!("weight {} ", self.weight));
        }
        match &self.family {
            Family::DeltaLinear(d) => s.push_str(&format!("dlinear {d}")),
            Family::Power(p) => s.push_str(&format!("power {p}")),
            Family::Custom(w) => {
                s.push_str("custom");
                for v in w {
                    s.push_str(&format!(" {v}"));
                }
            }
            f => s.push_str(f.name()),
        }
        s
    }

    pub fn family_name(&self) -> &'static str {
        self.family.name()
    }
}

fn expect_len(toks: &[&str], n: usize) -> std::result::Result<(), String> {
    if toks.len() != n {
        Err(format!("family `{}` takes {} token(s), got {}", toks[0], n, toks.len()))
    } else {
        Ok(())
    }
}

fn parse_num(t: &str) -> std::result::Result<f64, String> {
    t.parse::<f64>().map_err(|_| format!("bad number `{t}`"))
}

/// Symmetric cardinality penalties `w(0..=r)` for one hyperedge, with
/// `w(0) = 0`, concave increments, and nondecreasing values.
#[derive(Debug, Clone, PartialEq)]
pub struct ScbFunction {
    w: Vec<f64>,
}

impl ScbFunction {
    /// Validates and wraps a penalty sequence. The first violated index is
    /// named in the error.
    pub fn new(w: Vec<f64>) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::Validation { index: 0, reason: "empty penalty list".into() });
        }
        let scale = w.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(1.0);
        let tol = REL_VALIDATE * scale;
        if w[0].abs() > tol {
            return Err(Error::Validation {
                index: 0,
                reason: format!("w(0) = {} must be zero", w[0]),
            });
        }
        for j in 1..w.len().saturating_sub(1) {
            if 2.0 * w[j] + tol < w[j - 1] + w[j + 1] {
                return Err(Error::Validation {
                    index: j,
                    reason: format!(
                        "concavity violated: 2*{} < {} + {}",
                        w[j],
                        w[j - 1],
                        w[j + 1]
                    ),
                });
            }
        }
        for j in 1..w.len() {
            if w[j] + tol < w[j - 1] {
                return Err(Error::Validation {
                    index: j,
                    reason: format!("monotonicity violated: {} < {}", w[j], w[j - 1]),
                });
            }
            if w[j] < -tol {
                return Err(Error::Validation {
                    index: j,
                    reason: format!("negative penalty {}", w[j]),
                });
            }
        }
        Ok(ScbFunction { w })
    }

    pub fn r(&self) -> usize {
        self.w.len() - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.w
    }

    /// `w(1) = 0` forces the whole sequence to zero; such functions produce
    /// no gadget downstream.
    pub fn is_zero(&self) -> bool {
        *self.w.last().unwrap() <= 0.0
    }
}

/// Generalized cardinality penalties `w(0..=k)`: nonnegative with concave
/// increments, but not necessarily symmetric or zero at the endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct GscbFunction {
    w: Vec<f64>,
}

impl GscbFunction {
    pub fn new(w: Vec<f64>) -> Result<Self> {
        if w.len() < 2 {
            return Err(Error::Validation {
                index: 0,
                reason: "penalty list needs at least two entries (k >= 1)".into(),
            });
        }
        let scale = w.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(1.0);
        let tol = REL_VALIDATE * scale;
        for (i, v) in w.iter().enumerate() {
            if *v < -tol {
                return Err(Error::Validation {
                    index: i,
                    reason: format!("negative penalty {v}"),
                });
            }
        }
        for i in 1..w.len() - 1 {
            if 2.0 * w[i] + tol < w[i - 1] + w[i + 1] {
                return Err(Error::Validation {
                    index: i,
                    reason: format!(
                        "concavity violated: 2*{} < {} + {}",
                        w[i],
                        w[i - 1],
                        w[i + 1]
                    ),
                });
            }
        }
        Ok(GscbFunction { w })
    }

    pub fn k(&self) -> usize {
        self.w.len() - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.w
    }

    pub fn is_zero(&self) -> bool {
        self.w.iter().all(|v| *v <= 0.0)
    }

    /// Largest penalty; the per-component contribution to the seed "infinite"
    /// capacity scale.
    pub fn max_value(&self) -> f64 {
        self.w.iter().fold(0.0_f64, |m, v| m.max(*v))
    }

    /// Scales every penalty by `c >= 0`.
    pub fn scaled(&self, c: f64) -> GscbFunction {
        GscbFunction { w: self.w.iter().map(|v| v * c).collect() }
    }
}

/// Validates a raw penalty list as a generalized splitting function.
pub fn materialize_gscb(penalties: &[f64]) -> Result<GscbFunction> {
    GscbFunction::new(penalties.to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(f: Family) -> SplittingSpec {
        SplittingSpec::unweighted(f).unwrap()
    }

    #[test]
    fn evaluate_catalog_examples() {
        assert_eq!(spec(Family::Clique).evaluate(4, 1).unwrap(), 3.0);
        assert_eq!(spec(Family::Linear).evaluate(5, 0).unwrap(), 0.0);
        assert_eq!(spec(Family::DeltaLinear(2.0)).evaluate(10, 4).unwrap(), 2.0);
        assert_eq!(spec(Family::AllOrNothing).evaluate(6, 6).unwrap(), 0.0);
        assert_eq!(spec(Family::AllOrNothing).evaluate(6, 2).unwrap(), 1.0);
    }

    #[test]
    fn evaluate_rejects_out_of_range() {
        assert!(matches!(spec(Family::Clique).evaluate(4, 5), Err(Error::Domain(_))));
    }

    #[test]
    fn evaluate_rejects_wrong_custom_length() {
        let s = spec(Family::Custom(vec![0.0, 1.0]));
        assert!(matches!(s.evaluate(6, 1), Err(Error::Spec(_))));
    }

    #[test]
    fn materialize_examples() {
        let c = spec(Family::Clique).materialize_scb(4).unwrap();
        assert_eq!(c.values(), &[0.0, 3.0, 4.0]);

        let a = spec(Family::AllOrNothing).materialize_scb(6).unwrap();
        assert_eq!(a.values(), &[0.0, 1.0, 1.0, 1.0]);

        let s = spec(Family::Sqrt).materialize_scb(9).unwrap();
        let expect = [0.0, 1.0, 2f64.sqrt(), 3f64.sqrt(), 2.0];
        for (got, want) in s.values().iter().zip(expect.iter()) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn singleton_edge_materializes_to_zero_function() {
        let f = spec(Family::Clique).materialize_scb(1).unwrap();
        assert_eq!(f.r(), 0);
        assert!(f.is_zero());
    }

    #[test]
    fn custom_violations_name_first_bad_index() {
        // 2*1 < 0 + 3 breaks concavity at index 1.
        let s = spec(Family::Custom(vec![0.0, 1.0, 3.0]));
        match s.materialize_scb(4) {
            Err(Error::Validation { index, .. }) => assert_eq!(index, 1),
            other => panic!("expected validation error, got {other:?}"),
        }

        let s = spec(Family::Custom(vec![0.5, 1.0, 1.0]));
        match s.materialize_scb(4) {
            Err(Error::Validation { index, .. }) => assert_eq!(index, 0),
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn gscb_examples() {
        assert!(materialize_gscb(&[0.0, 3.0, 4.0, 3.0, 0.0]).is_ok());
        assert!(materialize_gscb(&[2.0, 3.0, 3.0, 2.0]).is_ok());
        match materialize_gscb(&[0.0, 1.0, 3.0]) {
            Err(Error::Validation { index, .. }) => assert_eq!(index, 1),
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn catalog_families_satisfy_scb_invariants_up_to_k_64() {
        let families = [
            Family::Clique,
            Family::Linear,
            Family::DeltaLinear(3.0),
            Family::Sqrt,
            Family::Power(0.7),
            Family::AllOrNothing,
        ];
        for f in families {
            let s = spec(f);
            for k in 1..=64 {
                let w = s.materialize_scb(k).unwrap_or_else(|e| {
                    panic!("{} failed at k={k}: {e}", s.family_name())
                });
                // Exact re-scan of Eqs. at machine precision.
                let v = w.values();
                assert_eq!(v[0], 0.0);
                for j in 1..v.len().saturating_sub(1) {
                    assert!(2.0 * v[j] >= v[j - 1] + v[j + 1] - 1e-9 * v[v.len() - 1].max(1.0));
                }
                for j in 1..v.len() {
                    assert!(v[j] >= v[j - 1] - 1e-12);
                }
            }
        }
    }

    #[test]
    fn evaluate_is_symmetric_and_scales() {
        let families = [
            Family::Clique,
            Family::Linear,
            Family::DeltaLinear(2.0),
            Family::Sqrt,
            Family::Power(0.9),
            Family::AllOrNothing,
        ];
        for f in families {
            let s = spec(f.clone());
            let s3 = SplittingSpec::new(f, 3.0).unwrap();
            for k in 1..=12 {
                for i in 0..=k {
                    let a = s.evaluate(k, i).unwrap();
                    let b = s.evaluate(k, k - i).unwrap();
                    assert_eq!(a, b);
                    let scaled = s3.evaluate(k, i).unwrap();
                    assert!((scaled - 3.0 * a).abs() <= 1e-12 * scaled.abs().max(1.0));
                }
            }
        }
    }

    #[test]
    fn grammar_round_trip() {
        let cases = [
            "clique",
            "linear",
            "dlinear 2",
            "sqrt",
            "power 0.9",
            "aon",
            "custom 0 1 1.5",
            "weight 2.5 clique",
            "weight 0.5 dlinear 4",
        ];
        for c in cases {
            let toks: Vec<&str> = c.split_whitespace().collect();
            let s = SplittingSpec::parse_tokens(&toks).unwrap_or_else(|e| panic!("{c}: {e}"));
            let back = s.to_tokens();
            let s2 = SplittingSpec::parse_tokens(&back.split_whitespace().collect::<Vec<_>>())
                .unwrap();
            assert_eq!(s, s2, "{c}");
        }
        assert!(SplittingSpec::parse_tokens(&["dlinear", "0.5"]).is_err());
        assert!(SplittingSpec::parse_tokens(&["power", "1.5"]).is_err());
        assert!(SplittingSpec::parse_tokens(&["frobnicate"]).is_err());
    }
}
