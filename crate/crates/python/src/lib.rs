use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use ncdeg_core::apps::{bl_membership_rank2, build_edmonds, fmm_max_weight, BipartiteInstance, BlDatum, LineCollection};
use ncdeg_core::cli::{execute, Cli, ResultReport};
use ncdeg_core::degdet::hungarian_deg_det;
use ncdeg_core::mvsp::{nc_rank as nc_rank_core, Solver, SolverKind, DEFAULT_SUBSPACE_CAP};
use ncdeg_core::scalar::{rng_from_seed, ExactRational, Fp};
use ncdeg_core::symbolic::{SymbolicMatrix, WeightedSymbolicMatrix};

type Triples = Vec<Vec<(usize, usize, i64)>>;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn field(p: u64) -> PyResult<Fp> {
    Fp::new(p).map_err(err)
}

fn matrix(p: u64, n: usize, terms: &Triples) -> PyResult<SymbolicMatrix> {
    if let Some(&(i, j, _)) = terms.iter().flatten().find(|&&(i, j, _)| i >= n || j >= n) {
        return Err(err(format!("entry ({i}, {j}) outside a {n} x {n} matrix")));
    }
    Ok(SymbolicMatrix::from_triples(field(p)?, n, n, terms))
}

fn values(prof: &ncdeg_core::degdet::DegreeProfile) -> Vec<Option<i64>> {
    prof.finite_values()
}

/// nc-rank of `sum_k A_k x_k`; each term is a list of 0-based `(i, j, value)`.
#[pyfunction]
#[pyo3(signature = (n, terms, p = 65521, seed = 0, trials = 8))]
fn nc_rank(n: usize, terms: Triples, p: u64, seed: u64, trials: usize) -> PyResult<usize> {
    let a = matrix(p, n, &terms)?;
    Ok(nc_rank_core(&a, trials, &mut rng_from_seed(seed)))
}

/// `[Delta_0, ..., Delta_n]` of `sum_k A_k t^{c_k} x_k`, `None` for minus infinity.
#[pyfunction]
#[pyo3(signature = (n, terms, weights, p = 65521, seed = 0))]
fn delta_profile(n: usize, terms: Triples, weights: Vec<i64>, p: u64, seed: u64) -> PyResult<Vec<Option<i64>>> {
    let a = WeightedSymbolicMatrix::new(matrix(p, n, &terms)?, weights).map_err(err)?;
    let prof = hungarian_deg_det(&a, &Solver::new(SolverKind::Auto, seed), &mut rng_from_seed(seed)).map_err(err)?;
    Ok(values(&prof))
}

/// Maximum weight of an `l`-matching for every `l` (0-based edges).
#[pyfunction]
#[pyo3(signature = (n, edges, weights, seed = 0))]
fn bipartite_profile(n: usize, edges: Vec<(usize, usize)>, weights: Vec<i64>, seed: u64) -> PyResult<Vec<Option<i64>>> {
    let f = field(65521)?;
    let a = build_edmonds(f, &BipartiteInstance { n, edges, weights }).map_err(err)?;
    let prof = hungarian_deg_det(&a, &Solver::new(SolverKind::Auto, seed), &mut rng_from_seed(seed)).map_err(err)?;
    Ok(values(&prof))
}

/// Maximum-weight fractional matroid matching of the lines `span(a_k, b_k)`,
/// as `(max, per_cardinality)` with exact values written `"num/den"`.
#[pyfunction]
#[pyo3(signature = (n, a, b, weights, p, seed = 0))]
fn fmm(
    n: usize,
    a: Vec<Vec<i64>>,
    b: Vec<Vec<i64>>,
    weights: Vec<i64>,
    p: u64,
    seed: u64,
) -> PyResult<(String, Vec<Option<String>>)> {
    let h = LineCollection { n, a, b, weights };
    let res = fmm_max_weight(field(p)?, &h, &Solver::new(SolverKind::Auto, seed), &mut rng_from_seed(seed)).map_err(err)?;
    Ok((res.max.to_string(), res.per_ell.iter().map(|v| v.as_ref().map(ExactRational::to_string)).collect()))
}

/// Rank-2 Brascamp-Lieb membership; `maps[j]` holds the two rows of `B_j`
/// and exponents are strings such as `"1/2"`.
#[pyfunction]
#[pyo3(signature = (n, maps, exponents, p))]
fn bl_member(n: usize, maps: Vec<[Vec<i64>; 2]>, exponents: Vec<String>, p: u64) -> PyResult<bool> {
    let p_exp = exponents.iter().map(|s| s.parse::<ExactRational>().map_err(err)).collect::<PyResult<Vec<_>>>()?;
    let verdict = bl_membership_rank2(field(p)?, &BlDatum { n, maps, p: p_exp }, DEFAULT_SUBSPACE_CAP).map_err(err)?;
    Ok(verdict.member)
}

/// Runs a command-line invocation such as `["hungarian", "k3.json"]` and
/// returns `(exit_code, report_json)`.
#[pyfunction]
fn run(args: Vec<String>) -> PyResult<(i32, String)> {
    use clap::Parser;
    let argv = std::iter::once("ncdeg".to_string()).chain(args.iter().cloned());
    let cli = Cli::try_parse_from(argv).map_err(err)?;
    let rep: ResultReport = execute(&cli.command, &cli.common, args.join(" ")).map_err(err)?;
    let text = serde_json::to_string_pretty(&rep).map_err(err)?;
    Ok((ncdeg_core::cli::exit_code(&rep), text))
}

#[pymodule]
fn ncdeg(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(nc_rank, m)?)?;
    m.add_function(wrap_pyfunction!(delta_profile, m)?)?;
    m.add_function(wrap_pyfunction!(bipartite_profile, m)?)?;
    m.add_function(wrap_pyfunction!(fmm, m)?)?;
    m.add_function(wrap_pyfunction!(bl_member, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    Ok(())
}
