use simkno_core::formula::{parse_open, Formula};
use simkno_core::model::fixture;
use simkno_core::rewrite::{
    extend_capabilities_rho, extend_capabilities_tau, generated_submodel, rho, rho_m, symmetrize,
    tau,
};
use simkno_core::satbench::{bounded_sat, SatBounds};
use simkno_core::semantics::truthset;
use simkno_core::translate::similarity_lift;
use simkno_core::WeightedModel;

/// Truthset-based check; the recursive checker is exponential in the modal
/// depth of the rewritten formulas.
fn satisfies(
    m: &WeightedModel,
    s: &str,
    phi: &Formula,
) -> Result<bool, simkno_core::semantics::SemanticsError> {
    Ok(truthset(m, phi)?.contains(m.state_index(s).unwrap()))
}

/// Two states, no loops, `C(a) = {1,2}`, `C(b) = ∅`; each direction of the
/// edge carries one of the two abilities and `p` is false everywhere.
fn split_edge() -> WeightedModel {
    WeightedModel::from_json_str(
        r#"{
          "states": ["w0", "w1"],
          "abilities": ["1", "2"],
          "agents": ["a", "b"],
          "capabilities": {"a": ["1", "2"], "b": []},
          "edges": [
            {"from": "w0", "to": "w1", "labels": ["2"]},
            {"from": "w1", "to": "w0", "labels": ["1"]}
          ],
          "valuation": {}
        }"#,
    )
    .unwrap()
}

/// Symmetrizing by `E(s,t) ∪ E(t,s)` can create an edge that covers a
/// pooled capability neither direction covered before. The guards of `ρᵐ`
/// only constrain existing edges, so the backward witness breaks. (`b`
/// contributes nothing but makes the `M_Ag` relation reach `w1`.)
#[test]
fn rho_m_union_symmetrization_can_break_the_witness() {
    let m = split_edge();
    for text in ["D{a,b} p", "M{a,b} ~p -> D{a,b} p"] {
        let phi = parse_open(text).unwrap();
        let r = rho_m(&phi).unwrap();
        assert!(satisfies(&m, "w0", &r.output).unwrap(), "{text}");

        let (sub, at) = generated_submodel(&m, 0, &phi.agents()).unwrap();
        let witness = similarity_lift(&symmetrize(&sub)).unwrap();
        assert!(witness.validate().is_similarity());
        let name = witness.states()[at].clone();
        assert!(!satisfies(&witness, &name, &phi).unwrap(), "{text}");

        // The formula itself is still s-satisfiable.
        let small = SatBounds {
            max_states: 2,
            max_abilities: 2,
            max_candidates: 100_000,
        };
        assert!(bounded_sat(&phi, &small, true).is_sat(), "{text}");
    }
}

#[test]
fn rho_and_tau_forward_on_example() {
    let m = fixture("paper_example").unwrap();
    let phi = parse_open("D{a,b} (~p1 & p4) & ~M{a,b} p4").unwrap();
    assert!(satisfies(&m, "s4", &phi).unwrap());

    let r = rho(&phi).unwrap();
    let m2 = extend_capabilities_rho(&m, &r.extension).unwrap();
    assert!(satisfies(&m2, "s4", &r.output).unwrap());

    let t = tau(&phi).unwrap();
    let m3 = extend_capabilities_tau(&m, &t.extension).unwrap();
    assert!(satisfies(&m3, "s4", &t.output).unwrap());
}
