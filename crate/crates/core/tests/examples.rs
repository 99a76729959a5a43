//! Every example runs to completion; their internal assertions are checks too.

#[path = "../examples/associahedron.rs"]
mod associahedron;

#[path = "../examples/tree_pairs.rs"]
mod tree_pairs;

#[path = "../examples/bracketings.rs"]
mod bracketings;

#[path = "../examples/oracle.rs"]
mod oracle;

#[path = "../examples/polytope_check.rs"]
mod polytope_check;

#[path = "../examples/decomposition.rs"]
mod decomposition;

#[path = "../examples/symmetry.rs"]
mod symmetry;

#[path = "../examples/appendix.rs"]
mod appendix;

#[path = "../examples/export_dot.rs"]
mod export_dot;

#[test]
fn associahedron_runs() {
    associahedron::run();
}

#[test]
fn tree_pairs_runs() {
    tree_pairs::run();
}

#[test]
fn bracketings_runs() {
    bracketings::run();
}

#[test]
fn oracle_runs() {
    oracle::run();
}

#[test]
fn polytope_check_runs() {
    polytope_check::run();
}

#[test]
fn decomposition_runs() {
    decomposition::run();
}

#[test]
fn symmetry_runs() {
    symmetry::run();
}

#[test]
fn appendix_runs() {
    appendix::run();
}

#[test]
fn export_dot_runs() {
    export_dot::run();
}
