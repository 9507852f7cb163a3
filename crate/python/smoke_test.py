"""Smoke test for the reconforge extension module.

Build and install first:  pip install --no-build-isolation crates/python
"""

import reconforge as rf


def main() -> None:
    k2, k3, k4 = rf.complete(2), rf.complete(3), rf.complete(4)
    assert len(rf.enumerate_homs(k2, k3)) == 6
    assert rf.component(k4, k4, [0, 1, 2, 3]) == [[0, 1, 2, 3]]

    result = rf.reachable(k2, k3, [0, 1], [1, 0])
    assert result["result"] == "reachable" and result["moves"] == 3
    assert rf.validate_witness(k2, k3, result["witness"])["valid"]
    assert rf.reachable(k4, k4, [0, 1, 2, 3], [1, 0, 2, 3])["result"] == "unreachable"

    cube, emb = rf.generate("cube")
    assert (cube.n, len(cube.edges)) == (8, 12)
    report = rf.validate("sphere-quad", cube, emb)
    assert report["valid"] and report["face_count"] == 6
    assert rf.Graph.from_json(cube.to_json()).edges == cube.edges

    for host, kit in [(cube, emb), rf.generate("reflexive-octahedron")]:
        for kind in ("not-both-one", "not-all-zero"):
            gadget = rf.compile_gadget(kind, host, kit)
            verdict = gadget.verify()
            assert verdict["transitions"]["status"] == "pass", verdict
            assert verdict["host_frozen"] is True

    edge = rf.Graph(2, [(0, 1)])
    red = rf.Reduction(edge, [0, 1], [0, 2], cube, emb)
    assert (red.nbo_count, red.naz_count) == (8, 2)
    assert red.project(red.f_prime) == [0, 1]
    lifted = red.lift([[0, 1], [0, 2]])
    assert lifted[0] == red.f_prime and lifted[-1] == red.g_prime_colouring
    assert rf.validate_witness(red.g_prime, cube, lifted)["valid"]
    assert red.walk(steps=1000, seed=5)["violations"] == 0

    w5, w5_emb = rf.generate("projective-wheel", k=5)
    lift = rf.pp_lift(w5, w5_emb)
    assert lift["validation"]["valid"] and lift["graph"]["n"] == 12
    assert rf.wheel_retraction(6)["check"]["is_retraction"]

    try:
        rf.reachable(k2, k3, [0, 0], [0, 1])
    except rf.ReconforgeError:
        pass
    else:
        raise AssertionError("improper colouring accepted")
    try:
        rf.enumerate_homs(rf.Graph(6, []), k4, cap=10)
    except rf.CapExceeded:
        pass
    else:
        raise AssertionError("cap not enforced")

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
