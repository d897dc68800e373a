use pyo3::prelude::*;

#[pymodule]
fn polysimp_py(_m: &Bound<'_, PyModule>) -> PyResult<()> {
    Ok(())
}
