use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::apps::{
    build_edmonds, build_matroid_intersection, build_matroid_matching, AppsError, BipartiteInstance, BlDatum, LineCollection,
    MatroidPairInstance,
};
use crate::ratfunc::{RatFn, RationalMatrix};
use crate::scalar::{ExactRational, Fp, Mat};
use crate::symbolic::{RationalSymbolicMatrix, SymbolicMatrix, WeightedSymbolicMatrix};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed instance: {0}")]
    Json(#[from] serde_json::Error),
    #[error("field: {0}")]
    Field(String),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Apps(#[from] AppsError),
    #[error("kind `{kind}` cannot be used here: {why}")]
    WrongKind { kind: &'static str, why: &'static str },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u64,
}

/// Sparse term: triples `[i, j, value]` (1-based) or `[i, j, value, e]` for
/// `value * t^e`. Entries at the same position add up.
pub type Triples = Vec<Vec<i64>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolicBody {
    pub rows: usize,
    pub cols: usize,
    pub terms: Vec<Triples>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightedBody {
    pub rows: usize,
    pub cols: usize,
    pub terms: Vec<Triples>,
    pub weights: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BipartiteBody {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    pub weights: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorPairBody {
    pub n: usize,
    pub a: Vec<Vec<i64>>,
    pub b: Vec<Vec<i64>>,
    pub weights: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlBody {
    pub n: usize,
    pub maps: Vec<[Vec<i64>; 2]>,
    pub p: Vec<ExactRational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "kebab-case")]
pub enum Payload {
    Symbolic(SymbolicBody),
    Weighted(WeightedBody),
    Bipartite(BipartiteBody),
    MatroidPair(VectorPairBody),
    Lines(VectorPairBody),
    Bl(BlBody),
}

/// On-disk instance: `{"field": {"p": ..}, "kind": .., "payload": {..}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub field: FieldSpec,
    #[serde(flatten)]
    pub payload: Payload,
}

/// Validated instance with 0-based indices.
#[derive(Clone, Debug)]
pub enum Instance {
    Symbolic(SymbolicMatrix),
    /// Symbolic matrix with some `t`-dependent coefficients.
    General(RationalSymbolicMatrix),
    Weighted(WeightedSymbolicMatrix),
    Bipartite(BipartiteInstance),
    MatroidPair(MatroidPairInstance),
    Lines(LineCollection),
    Bl(BlDatum),
}

#[derive(Clone, Debug)]
pub struct Parsed {
    pub field: Fp,
    pub instance: Instance,
}

impl Instance {
    pub fn kind(&self) -> &'static str {
        match self {
            Instance::Symbolic(_) | Instance::General(_) => "symbolic",
            Instance::Weighted(_) => "weighted",
            Instance::Bipartite(_) => "bipartite",
            Instance::MatroidPair(_) => "matroid-pair",
            Instance::Lines(_) => "lines",
            Instance::Bl(_) => "bl",
        }
    }
}

impl Parsed {
    /// Weighted matrix with constant coefficients, building the Edmonds,
    /// matroid-intersection or matroid-matching matrix where needed.
    pub fn weighted(&self) -> Result<WeightedSymbolicMatrix, ParseError> {
        let f = self.field;
        Ok(match &self.instance {
            Instance::Symbolic(a) => WeightedSymbolicMatrix::unweighted(a.clone()),
            Instance::Weighted(a) => a.clone(),
            Instance::Bipartite(b) => build_edmonds(f, b)?,
            Instance::MatroidPair(m) => build_matroid_intersection(f, m)?,
            Instance::Lines(h) => build_matroid_matching(f, h)?,
            Instance::General(_) => return Err(ParseError::WrongKind { kind: "symbolic", why: "coefficients depend on t" }),
            Instance::Bl(_) => return Err(ParseError::WrongKind { kind: "bl", why: "not a symbolic matrix" }),
        })
    }

    /// Matrix over GF(p)(t) for the general algorithms.
    pub fn rational(&self) -> Result<RationalSymbolicMatrix, ParseError> {
        match &self.instance {
            Instance::General(b) => Ok(b.clone()),
            _ => Ok(self.weighted()?.to_rational()),
        }
    }
}

fn triple_entry(f: Fp, rows: usize, cols: usize, k: usize, t: &[i64]) -> Result<(usize, usize, RatFn, bool), ParseError> {
    let bad = |why: String| ParseError::Invalid(format!("term {} triple {t:?}: {why}", k + 1));
    if t.len() != 3 && t.len() != 4 {
        return Err(bad("expected [i, j, value] or [i, j, value, exponent]".into()));
    }
    if t[0] < 1 || t[0] as usize > rows {
        return Err(bad(format!("row {} outside 1..={rows}", t[0])));
    }
    if t[1] < 1 || t[1] as usize > cols {
        return Err(bad(format!("column {} outside 1..={cols}", t[1])));
    }
    let e = t.get(3).copied().unwrap_or(0);
    Ok(((t[0] - 1) as usize, (t[1] - 1) as usize, RatFn::monomial(f, f.from_i64(t[2]), e), t.len() == 4))
}

fn rational_terms(f: Fp, rows: usize, cols: usize, terms: &[Triples]) -> Result<(Vec<RationalMatrix>, bool), ParseError> {
    let mut uses_t = false;
    let mut out = Vec::with_capacity(terms.len());
    for (k, trip) in terms.iter().enumerate() {
        let mut m = RationalMatrix::zeros(f, rows, cols);
        for t in trip {
            let (i, j, v, has_e) = triple_entry(f, rows, cols, k, t)?;
            uses_t |= has_e && t[3] != 0;
            let sum = m.get(i, j).add(&v);
            m.set(i, j, sum);
        }
        out.push(m);
    }
    Ok((out, uses_t))
}

fn constant_terms(f: Fp, rows: usize, cols: usize, terms: &[Triples]) -> Result<Vec<Mat>, ParseError> {
    let (rt, uses_t) = rational_terms(f, rows, cols, terms)?;
    if uses_t {
        return Err(ParseError::Invalid("weighted terms must have constant coefficients".into()));
    }
    Ok(rt.iter().map(|m| m.constant_part()).collect())
}

fn zero_based(n: usize, edges: &[[usize; 2]]) -> Result<Vec<(usize, usize)>, ParseError> {
    edges
        .iter()
        .map(|&[i, j]| {
            if i < 1 || j < 1 || i > n || j > n {
                Err(ParseError::Invalid(format!("edge [{i}, {j}] outside 1..={n}")))
            } else {
                Ok((i - 1, j - 1))
            }
        })
        .collect()
}

impl InstanceFile {
    pub fn from_json(text: &str) -> Result<InstanceFile, ParseError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &str) -> Result<InstanceFile, ParseError> {
        let text = std::fs::read_to_string(path).map_err(|source| ParseError::Io { path: path.into(), source })?;
        InstanceFile::from_json(&text)
    }

    /// Validates against the dimensions and converts to library types.
    /// `prime` overrides the field of the file.
    pub fn parse(&self, prime: Option<u64>) -> Result<Parsed, ParseError> {
        let p = prime.unwrap_or(self.field.p);
        let f = Fp::new(p).map_err(|e| ParseError::Field(e.to_string()))?;
        let instance = match &self.payload {
            Payload::Symbolic(s) => {
                let (rt, uses_t) = rational_terms(f, s.rows, s.cols, &s.terms)?;
                if uses_t {
                    Instance::General(RationalSymbolicMatrix::new(f, s.rows, s.cols, rt).map_err(invalid)?)
                } else {
                    let terms = rt.iter().map(|m| m.constant_part()).collect();
                    Instance::Symbolic(SymbolicMatrix::new(f, s.rows, s.cols, terms).map_err(invalid)?)
                }
            }
            Payload::Weighted(w) => {
                if w.weights.len() != w.terms.len() {
                    return Err(ParseError::Invalid(format!("{} terms but {} weights", w.terms.len(), w.weights.len())));
                }
                let base =
                    SymbolicMatrix::new(f, w.rows, w.cols, constant_terms(f, w.rows, w.cols, &w.terms)?).map_err(invalid)?;
                Instance::Weighted(WeightedSymbolicMatrix::new(base, w.weights.clone()).map_err(invalid)?)
            }
            Payload::Bipartite(b) => {
                let inst = BipartiteInstance { n: b.n, edges: zero_based(b.n, &b.edges)?, weights: b.weights.clone() };
                build_edmonds(f, &inst)?;
                Instance::Bipartite(inst)
            }
            Payload::MatroidPair(v) => {
                let inst = MatroidPairInstance { n: v.n, a: v.a.clone(), b: v.b.clone(), weights: v.weights.clone() };
                build_matroid_intersection(f, &inst)?;
                Instance::MatroidPair(inst)
            }
            Payload::Lines(v) => {
                let h = LineCollection { n: v.n, a: v.a.clone(), b: v.b.clone(), weights: v.weights.clone() };
                h.validate(f)?;
                Instance::Lines(h)
            }
            Payload::Bl(b) => {
                if b.p.len() != b.maps.len() {
                    return Err(ParseError::Invalid(format!("{} maps but {} exponents", b.maps.len(), b.p.len())));
                }
                if let Some((j, _)) = b.maps.iter().enumerate().find(|(_, m)| m.iter().any(|r| r.len() != b.n)) {
                    return Err(ParseError::Invalid(format!("map {} is not 2 x {}", j + 1, b.n)));
                }
                Instance::Bl(BlDatum { n: b.n, maps: b.maps.clone(), p: b.p.clone() })
            }
        };
        Ok(Parsed { field: f, instance })
    }
}

fn invalid(e: impl std::fmt::Display) -> ParseError {
    ParseError::Invalid(e.to_string())
}

fn canonical_triples(m: &RationalMatrix, f: Fp) -> Result<Triples, ParseError> {
    let mut out = Vec::new();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let v = m.get(i, j);
            if v.is_zero() {
                continue;
            }
            // only Laurent polynomials num / t^k are representable
            if !v.den().is_monomial() {
                return Err(ParseError::Invalid(format!("entry ({}, {}) is not a Laurent polynomial", i + 1, j + 1)));
            }
            let k = v.den().deg().unwrap();
            for (e, &c) in v.num().coeffs().iter().enumerate() {
                if c != 0 {
                    let (exp, c) = (e as i64 - k, f.to_signed(c));
                    let (i, j) = (i as i64 + 1, j as i64 + 1);
                    out.push(if exp == 0 { vec![i, j, c] } else { vec![i, j, c, exp] });
                }
            }
        }
    }
    Ok(out)
}

/// Canonical file for a parsed instance: sorted triples with reduced
/// coefficients, so that `dump(parse(dump(x))) == dump(x)`.
pub fn canonical(p: &Parsed) -> Result<InstanceFile, ParseError> {
    let f = p.field;
    let payload = match &p.instance {
        Instance::Symbolic(a) => Payload::Symbolic(SymbolicBody {
            rows: a.rows(),
            cols: a.cols(),
            terms: a.to_triples().into_iter().map(|t| t.into_iter().map(|x| x.to_vec()).collect()).collect(),
        }),
        Instance::General(b) => Payload::Symbolic(SymbolicBody {
            rows: b.rows(),
            cols: b.cols(),
            terms: b.terms().iter().map(|m| canonical_triples(m, f)).collect::<Result<_, _>>()?,
        }),
        Instance::Weighted(a) => Payload::Weighted(WeightedBody {
            rows: a.base.rows(),
            cols: a.base.cols(),
            terms: a.base.to_triples().into_iter().map(|t| t.into_iter().map(|x| x.to_vec()).collect()).collect(),
            weights: a.weights.clone(),
        }),
        Instance::Bipartite(b) => Payload::Bipartite(BipartiteBody {
            n: b.n,
            edges: b.edges.iter().map(|&(i, j)| [i + 1, j + 1]).collect(),
            weights: b.weights.clone(),
        }),
        Instance::MatroidPair(m) => Payload::MatroidPair(VectorPairBody {
            n: m.n,
            a: reduce_all(f, &m.a),
            b: reduce_all(f, &m.b),
            weights: m.weights.clone(),
        }),
        Instance::Lines(h) => {
            Payload::Lines(VectorPairBody { n: h.n, a: reduce_all(f, &h.a), b: reduce_all(f, &h.b), weights: h.weights.clone() })
        }
        Instance::Bl(d) => Payload::Bl(BlBody {
            n: d.n,
            maps: d.maps.iter().map(|[r, s]| [reduce(f, r), reduce(f, s)]).collect(),
            p: d.p.clone(),
        }),
    };
    Ok(InstanceFile { field: FieldSpec { p: f.p() }, payload })
}

fn reduce(f: Fp, v: &[i64]) -> Vec<i64> {
    v.iter().map(|&x| f.to_signed(f.from_i64(x))).collect()
}

fn reduce_all(f: Fp, vs: &[Vec<i64>]) -> Vec<Vec<i64>> {
    vs.iter().map(|v| reduce(f, v)).collect()
}
