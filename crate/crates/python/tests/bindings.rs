use pyo3::ffi::c_str;
use pyo3::prelude::*;

fn with_module(code: &std::ffi::CStr) {
    use reconforge_py::reconforge_py;
    pyo3::append_to_inittab!(reconforge_py);
    Python::initialize();
    Python::attach(|py| {
        if let Err(e) = py.run(code, None, None) {
            e.display(py);
            panic!("python code failed");
        }
    });
}

#[test]
fn bindings_round_trip() {
    with_module(c_str!(
        r#"
import reconforge as rf
k2, k3, k4 = rf.complete(2), rf.complete(3), rf.complete(4)
assert len(rf.enumerate_homs(k2, k3)) == 6
assert rf.reachable(k4, k4, [0, 1, 2, 3], [1, 0, 2, 3])["result"] == "unreachable"
cube, emb = rf.generate("cube")
assert rf.validate("sphere-quad", cube, emb)["valid"]
g = rf.compile_gadget("not-both-one", cube, emb)
assert g.verify()["closed"]["status"] == "pass"
red = rf.Reduction(rf.Graph(2, [(0, 1)]), [0, 1], [0, 2], cube, emb)
w = red.lift([[0, 1], [0, 2]])
assert rf.validate_witness(red.g_prime, cube, w)["valid"]
try:
    rf.generate("nonsense")
    raise SystemExit("accepted an unknown family")
except rf.ReconforgeError:
    pass
"#
    ));
}
