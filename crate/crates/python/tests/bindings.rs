use pyo3::prelude::*;
use pyo3::types::{PyDict, PyModule};

fn with_module(f: impl FnOnce(&Bound<'_, PyModule>) -> PyResult<()>) {
    Python::attach(|py| {
        let m = PyModule::new(py, "aodkit").unwrap();
        aodkit_py::register(&m).unwrap();
        f(&m).unwrap();
    });
}

#[test]
fn verify_and_construct() {
    with_module(|m| {
        let rep = m.getattr("verify")?.call1(("G8", "ostbc"))?.cast_into::<PyDict>()?;
        assert!(rep.get_item("passed")?.unwrap().extract::<bool>()?);
        let fam: String = m.getattr("construct1")?.call1(("af2-ex1", "mn-eq6"))?.extract()?;
        let class: String = m.getattr("classify")?.call1((fam,))?.extract()?;
        assert_eq!(class, "AOD");
        let ex3 = m.getattr("verify")?.call1(("aod2-ex3", "aod"))?.cast_into::<PyDict>()?;
        assert!(!ex3.get_item("passed")?.unwrap().extract::<bool>()?);
        Ok(())
    });
}

#[test]
fn power_and_errors() {
    with_module(|m| {
        let rep = m.getattr("power_report")?.call1(("G8",))?.cast_into::<PyDict>()?;
        assert_eq!(rep.get_item("peak_ave")?.unwrap().extract::<f64>()?, 1.0);
        assert_eq!(rep.get_item("type_sum")?.unwrap().extract::<f64>()?, 16.0);
        let py = m.py();
        let err = m.getattr("kind")?.call1(("nope",)).unwrap_err();
        assert!(err.is_instance_of::<pyo3::exceptions::PyKeyError>(py));
        let err = m.getattr("power_report")?.call1(("G8", vec!["qpsk"])).unwrap_err();
        assert!(err.is_instance_of::<pyo3::exceptions::PyValueError>(py));
        Ok(())
    });
}
