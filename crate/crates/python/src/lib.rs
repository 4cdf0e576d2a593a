//! Python bindings. Codes, families and seeds cross the boundary as JSON
//! documents; anywhere one is expected a catalogue name works too.

use aodkit as core;
use core::{Constellation, Document, Error, KronOrder, Metric, PowerReport, SimConfig, Target, VerifyReport};
use num_rational::Ratio;
use pyo3::exceptions::{PyKeyError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::UnknownName { .. } => PyKeyError::new_err(e.to_string()),
        Error::Inconsistent(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn load(source: &str) -> PyResult<Document> {
    if source.trim_start().starts_with('{') {
        Document::from_json(source).map_err(to_py)
    } else {
        core::resolve_name(source).map_err(to_py)
    }
}

fn kron(order: &str) -> PyResult<KronOrder> {
    match order {
        "seed-outer" => Ok(KronOrder::SeedOuter),
        "seed-inner" => Ok(KronOrder::SeedInner),
        _ => Err(PyValueError::new_err(format!("unknown kron order '{order}'"))),
    }
}

fn constellations(specs: Option<Vec<String>>, k: usize) -> PyResult<Vec<Constellation>> {
    match specs {
        None => Ok(vec![Constellation::qpsk(); k]),
        Some(v) if v.len() == k => v.iter().map(|s| Constellation::parse(s).map_err(to_py)).collect(),
        Some(v) => Err(PyValueError::new_err(format!("{} constellations for {k} symbols", v.len()))),
    }
}

/// Fixture code names.
#[pyfunction]
fn fixture_names() -> Vec<&'static str> {
    core::FIXTURE_NAMES.to_vec()
}

/// Every catalogue name: fixtures, families and seeds.
#[pyfunction]
fn catalog_names() -> Vec<&'static str> {
    core::catalog_names()
}

/// The JSON document for a name (or a JSON document, normalised).
#[pyfunction]
fn load_json(source: &str) -> PyResult<String> {
    Ok(load(source)?.to_json())
}

/// `"code"`, `"family"` or `"mn seed"`.
#[pyfunction]
fn kind(source: &str) -> PyResult<&'static str> {
    Ok(load(source)?.kind())
}

/// Human-readable rendering.
#[pyfunction]
fn show(source: &str) -> PyResult<String> {
    Ok(load(source)?.to_string())
}

fn report_dict<'py>(py: Python<'py>, report: &VerifyReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("passed", report.passed)?;
    let violations = report
        .violations
        .iter()
        .map(|v| {
            let item = PyDict::new(py);
            item.set_item("condition", v.condition.id())?;
            item.set_item("matrices", v.matrices.clone())?;
            Ok(item)
        })
        .collect::<PyResult<Vec<_>>>()?;
    d.set_item("violations", violations)?;
    Ok(d)
}

/// Checks at level `ostbc`, `aod`, `af` or `mn-seed`.
#[pyfunction]
#[pyo3(signature = (source, level, target = "aod"))]
fn verify<'py>(py: Python<'py>, source: &str, level: &str, target: &str) -> PyResult<Bound<'py, PyDict>> {
    let doc = load(source)?;
    let report = match level {
        "ostbc" => core::verify_ostbc(&doc.into_code().map_err(to_py)?),
        "aod" => core::verify_aod(&doc.into_family().map_err(to_py)?),
        "af" => core::verify_af(&doc.into_family().map_err(to_py)?),
        "mn-seed" => {
            let t = match target {
                "aod" => Target::Aod,
                "af" => Target::Af,
                _ => return Err(PyValueError::new_err(format!("unknown target '{target}'"))),
            };
            core::verify_mn_seed(&doc.into_seed().map_err(to_py)?, t)
        }
        _ => return Err(PyValueError::new_err(format!("unknown level '{level}'"))),
    };
    report_dict(py, &report)
}

/// `"AOD"`, `"AF"` or `"invalid"`.
#[pyfunction]
fn classify(source: &str) -> PyResult<String> {
    Ok(core::classify(&load(source)?.into_family().map_err(to_py)?).to_string())
}

/// Construction 1; returns the family as JSON.
#[pyfunction]
#[pyo3(signature = (family, seed, kron_order = "seed-outer"))]
fn construct1(family: &str, seed: &str, kron_order: &str) -> PyResult<String> {
    let fam = load(family)?.into_family().map_err(to_py)?;
    let seed = load(seed)?.into_seed().map_err(to_py)?;
    Ok(core::construct1_with(&fam, &seed, kron(kron_order)?).map_err(to_py)?.to_json())
}

/// Construction 2; returns the family as JSON.
#[pyfunction]
#[pyo3(signature = (family, kron_order = "seed-outer"))]
fn construct2(family: &str, kron_order: &str) -> PyResult<String> {
    let fam = load(family)?.into_family().map_err(to_py)?;
    Ok(core::construct2_with(&fam, kron(kron_order)?).map_err(to_py)?.to_json())
}

fn metric(m: &Metric) -> f64 {
    m.to_f64()
}

fn ratio(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn power_dict<'py>(py: Python<'py>, rep: &PowerReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("peak_ave", metric(&rep.peak_ave))?;
    d.set_item("ave_min", metric(&rep.ave_min))?;
    d.set_item("peak_ave_exact", rep.peak_ave.to_string())?;
    d.set_item("ave_min_exact", rep.ave_min.to_string())?;
    d.set_item("p_o", ratio(rep.p_o))?;
    d.set_item("ave", metric(&rep.ave))?;
    let f: Vec<f64> = rep.types.f.iter().copied().map(ratio).collect();
    let g: Vec<f64> = rep.types.g.iter().copied().map(ratio).collect();
    d.set_item("types", (f, g))?;
    d.set_item("type_sum", ratio(rep.type_sum))?;
    d.set_item("constant_type", rep.guideline_constant_type)?;
    d.set_item("sum_ge_2n", rep.guideline_sum_ge_2n)?;
    Ok(d)
}

/// Power metrics; `constellations` holds one spec per symbol, QPSK by default.
#[pyfunction]
#[pyo3(signature = (code, constellations = None))]
fn power_report<'py>(py: Python<'py>, code: &str, constellations: Option<Vec<String>>) -> PyResult<Bound<'py, PyDict>> {
    let code = load(code)?.into_code().map_err(to_py)?;
    let consts = self::constellations(constellations, code.k())?;
    power_dict(py, &core::power_report(&code, &consts).map_err(to_py)?)
}

/// Table 1 or 2 as comma-delimited text, or the human layout.
#[pyfunction]
#[pyo3(signature = (table, delimited = true))]
fn table_report(table: u8, delimited: bool) -> PyResult<String> {
    let rows = core::table_report(table).map_err(to_py)?;
    Ok(if delimited { core::render_delimited(&rows) } else { core::render_table(&rows) })
}

/// Applies a transform JSON document, or `"appendix"`; returns the code as JSON.
#[pyfunction]
fn apply_transform(code: &str, transform: &str) -> PyResult<String> {
    let code = load(code)?.into_code().map_err(to_py)?;
    let tr = if transform == "appendix" {
        core::appendix_transform()
    } else {
        core::MonomialTransform::from_json(transform).map_err(to_py)?
    };
    Ok(core::apply_transform(&code, &tr).map_err(to_py)?.to_json())
}

/// Block pattern name of an 8×8 code: `"Q8"`, `"Q2"` or `"none"`.
#[pyfunction]
fn block_pattern(code: &str) -> PyResult<String> {
    let code = load(code)?.into_code().map_err(to_py)?;
    Ok(core::extract_blocks(&code).map_err(to_py)?.pattern.to_string())
}

/// Bit error rate per SNR point, as a list of dicts.
#[pyfunction]
#[pyo3(signature = (code, snr_db, trials, seed, n_r = 1, constellations = None))]
fn simulate<'py>(
    py: Python<'py>,
    code: &str,
    snr_db: Vec<f64>,
    trials: u64,
    seed: u64,
    n_r: usize,
    constellations: Option<Vec<String>>,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let code = load(code)?.into_code().map_err(to_py)?;
    let consts = self::constellations(constellations, code.k())?;
    let cfg = SimConfig { code, constellations: consts, n_r, snr_db, trials, seed, noise_free: false };
    let res = py.detach(|| core::run_ber(&cfg)).map_err(to_py)?;
    res.points
        .iter()
        .map(|p| {
            let d = PyDict::new(py);
            d.set_item("snr_db", p.snr_db)?;
            d.set_item("trials", p.trials)?;
            d.set_item("bit_errors", p.bit_errors)?;
            d.set_item("bits", p.bits)?;
            d.set_item("ber", p.ber)?;
            d.set_item("std_err", p.std_err)?;
            Ok(d)
        })
        .collect()
}

#[pymodule]
#[pyo3(name = "aodkit")]
fn aodkit_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    register(m)
}

/// Adds every binding to `m`; also used to embed the module in tests.
pub fn register(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(fixture_names, m)?)?;
    m.add_function(wrap_pyfunction!(catalog_names, m)?)?;
    m.add_function(wrap_pyfunction!(load_json, m)?)?;
    m.add_function(wrap_pyfunction!(kind, m)?)?;
    m.add_function(wrap_pyfunction!(show, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(construct1, m)?)?;
    m.add_function(wrap_pyfunction!(construct2, m)?)?;
    m.add_function(wrap_pyfunction!(power_report, m)?)?;
    m.add_function(wrap_pyfunction!(table_report, m)?)?;
    m.add_function(wrap_pyfunction!(apply_transform, m)?)?;
    m.add_function(wrap_pyfunction!(block_pattern, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    Ok(())
}
