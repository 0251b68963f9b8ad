use super::{ModelError, WeightedModel};

pub const FIXTURE_NAMES: [&str; 6] = [
    "paper_example",
    "prop1_counter",
    "exp_d_square",
    "exp_d_point",
    "exp_m_pair",
    "exp_m_point",
];

fn names(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

/// The named reference models. Undirected edges are stored both ways.
pub fn fixture(name: &str) -> Result<WeightedModel, ModelError> {
    match name {
        "paper_example" => Ok(paper_example()),
        "prop1_counter" => Ok(prop1_counter()),
        "exp_d_square" => Ok(exp_d_square()),
        "exp_d_point" | "exp_m_point" => Ok(single_point()),
        "exp_m_pair" => Ok(exp_m_pair()),
        other => Err(ModelError::UnknownFixture(other.to_string())),
    }
}

/// Five manuscript variants judged by three authors on four sections.
fn paper_example() -> WeightedModel {
    let mut m = WeightedModel::new(
        names(&["s1", "s2", "s3", "s4", "s5"]),
        names(&["1", "2", "3", "4"]),
    )
    .expect("valid");
    let edges: &[(&str, &str, &[&str])] = &[
        ("s1", "s1", &["1", "2", "3", "4"]),
        ("s2", "s2", &["1", "2", "3", "4"]),
        ("s3", "s3", &["1", "2", "3", "4"]),
        ("s4", "s4", &["1", "2", "3", "4"]),
        ("s5", "s5", &["1", "2", "3", "4"]),
        ("s1", "s2", &["1", "4"]),
        ("s3", "s5", &["1", "4"]),
        ("s1", "s3", &["1", "2", "3"]),
        ("s2", "s5", &["1", "2", "3"]),
        ("s1", "s5", &["1"]),
        ("s2", "s3", &["1"]),
        ("s2", "s4", &["2", "3"]),
        ("s3", "s4", &["4"]),
        ("s4", "s5", &["2", "3", "4"]),
    ];
    for (s, t, l) in edges {
        m.set_edge_named(s, t, l, true).expect("valid");
    }
    m.set_capability_named("a", &["1", "2", "3"])
        .expect("valid");
    m.set_capability_named("b", &["2", "3", "4"])
        .expect("valid");
    m.set_capability_named("c", &["4"]).expect("valid");
    let val: &[(&str, &[&str])] = &[
        ("s1", &["p1", "p2"]),
        ("s2", &["p1", "p3"]),
        ("s3", &["p1", "p2", "p4"]),
        ("s4", &["p3", "p4"]),
        ("s5", &["p1", "p3", "p4"]),
    ];
    for (s, ps) in val {
        for p in *ps {
            m.set_prop_named(p, s).expect("valid");
        }
    }
    m
}

/// Two states with a single one-way edge: refutes the B-style schemas on
/// arbitrary models.
fn prop1_counter() -> WeightedModel {
    let mut m = WeightedModel::new(names(&["s", "t"]), names(&["1"])).expect("valid");
    m.set_edge_named("s", "t", &["1"], false).expect("valid");
    m.set_capability_named("a", &["1"]).expect("valid");
    m
}

fn exp_caps(m: &mut WeightedModel) {
    m.set_capability_named("a", &["1", "2"]).expect("valid");
    m.set_capability_named("b", &["1", "3"]).expect("valid");
}

/// A four-cycle where pooling abilities sees nothing.
fn exp_d_square() -> WeightedModel {
    let mut m = WeightedModel::new(names(&["u1", "u2", "u3", "u4"]), names(&["1", "2", "3"]))
        .expect("valid");
    m.set_edge_named("u1", "u2", &["1", "3"], true)
        .expect("valid");
    m.set_edge_named("u1", "u4", &["1", "2"], true)
        .expect("valid");
    m.set_edge_named("u2", "u3", &["1", "2"], true)
        .expect("valid");
    m.set_edge_named("u4", "u3", &["1", "3"], true)
        .expect("valid");
    exp_caps(&mut m);
    for s in ["u1", "u2", "u3", "u4"] {
        m.set_prop_named("p", s).expect("valid");
    }
    m
}

/// One `p`-state with a fully labelled loop. Serves as the partner of both
/// expressivity pairs.
fn single_point() -> WeightedModel {
    let mut m = WeightedModel::new(names(&["u'"]), names(&["1", "2", "3"])).expect("valid");
    m.set_edge_named("u'", "u'", &["1", "2", "3"], false)
        .expect("valid");
    exp_caps(&mut m);
    m.set_prop_named("p", "u'").expect("valid");
    m
}

/// Two states joined by an edge only the shared ability labels.
fn exp_m_pair() -> WeightedModel {
    let mut m = WeightedModel::new(names(&["u1", "u2"]), names(&["1", "2", "3"])).expect("valid");
    m.set_edge_named("u1", "u1", &["1", "2", "3"], false)
        .expect("valid");
    m.set_edge_named("u2", "u2", &["1", "2", "3"], false)
        .expect("valid");
    m.set_edge_named("u1", "u2", &["1"], true).expect("valid");
    exp_caps(&mut m);
    m.set_prop_named("p", "u1").expect("valid");
    m
}
