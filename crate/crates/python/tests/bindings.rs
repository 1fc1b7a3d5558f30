use pyo3::prelude::*;
use pyo3::types::PyDict;

fn with_module(code: &std::ffi::CStr) {
    Python::attach(|py| {
        let module = pyo3::wrap_pymodule!(vertex_induce_py::vertex_induce_py)(py);
        let globals = PyDict::new(py);
        globals.set_item("vi", module).unwrap();
        if let Err(e) = py.run(code, Some(&globals), None) {
            e.display(py);
            panic!("python code failed");
        }
    });
}

#[test]
fn fock_module_and_quotient() {
    with_module(
        c"
alg = vi.Algebra.heisenberg(5)
m = vi.Module.fock(alg, '-1/3', '2')
assert m.act('a(-1)', '0', 'v') == [('v', '-1/3')]
assert m.graded_dims() == [('0', 1), ('1', 1), ('2', 2)]
z = vi.ZhuAlgebra(alg, 3, level=1)
assert z.verify() == []
",
    );
}

#[test]
fn induced_module_maps_onto_fock() {
    with_module(
        c"
alg = vi.Algebra.heisenberg(6)
s = vi.InducedModule(vi.Module.fock(alg, '2', '2'), '2')
assert s.dim == 4 and s.embeds(1) and s.maps_isomorphically(2)
assert s.labels()[0] == 'w0'
",
    );
}

#[test]
fn errors_map_to_exception_types() {
    with_module(
        c"
try:
    vi.Module.fock(vi.Algebra.heisenberg(4), 'one half', '2')
except ValueError:
    pass
else:
    raise AssertionError('bad rational accepted')
try:
    vi.run('zhu', heisenberg=4, twist='sideways')
except ValueError:
    pass
else:
    raise AssertionError('bad twist accepted')
code, text = vi.run('induce', heisenberg=3, fock='1/2', cutoff='4')
assert code == 3 and text.startswith('error: precision'), text
",
    );
}
