import json

from patstd.development import is_development, is_internal_development_p
from patstd.head import head_step
from patstd.parser import parse_pattern, parse_term
from patstd.serialize import to_data, to_json, to_sexpr
from patstd.standard import check_standard

T = parse_term


def test_development_sexpr():
    proof = is_development(T("((\\x.x) A) ((\\y.y) B)"), T("A B"))
    assert to_sexpr(proof) == (
        "(DApp\n"
        "  (DBeta [x] (DRefl [x]) [A] (subst (x (DRefl [A]))))\n"
        "  (DBeta [y] (DRefl [y]) [B] (subst (y (DRefl [B])))))"
    )
    assert to_sexpr(is_development(T("A"), T("A"))) == "(DRefl [A])"


def test_json_mirrors_tree():
    proof = is_development(T("(\\x.x) A"), T("A"))
    data = json.loads(to_json(proof))
    assert data["rule"] == "DBeta"
    assert data["source"] == "(\\x.x) A" and data["target"] == "A"
    assert data["bindings"]["x"]["rule"] == "DRefl"
    assert data == to_data(proof)


def test_internal_and_justification():
    proof = is_internal_development_p(parse_pattern("(A x) x"), T("A B ((\\y.y) C)"), T("A B C"))
    assert to_sexpr(proof).startswith("(PCDataNo3\n  [A x x]")
    assert to_sexpr(head_step(T("(\\x.x) A"))[1]) == "(HBeta {x:=A})"
    assert to_data(head_step(T("(\\x.x) A"))[1]) == {"rule": "HBeta", "theta": {"x": "A"}}


def test_standard_proof():
    proof = check_standard([T("(\\x.C) ((\\y.y) A)"), T("C")])
    assert to_sexpr(proof) == "(StdHead [(\\x.C) ((\\y.y) A)] (StdConst [C]))"
    assert to_data(proof)["rest"] == {"rule": "StdConst", "term": "C"}
