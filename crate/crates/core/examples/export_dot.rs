//! Writes Hasse diagrams as Graphviz source and poset JSON.

use twoassoc::io::{export_dot, DotOptions, JsonCodec};
use twoassoc::poset::GradedPoset;
use twoassoc::treepair::enumerate_wn;

pub fn run() {
    let w = enumerate_wn(&[1, 0, 1]).unwrap();
    let opts = DotOptions { name: "w101".into(), ..DotOptions::default() };
    print!("{}", export_dot(&w.poset, &opts));

    let text = w.poset.encode();
    let back = GradedPoset::decode(&text).unwrap();
    assert!(back.is_isomorphic(&w.poset));
    println!("// {} bytes of JSON, round trip ok", text.len());
}

#[allow(dead_code)]
fn main() {
    run();
}
