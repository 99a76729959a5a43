//! Recomputes the bundled table of 2- and 3-dimensional face vectors.

use twoassoc::io::load_appendix_table;
use twoassoc::treepair::enumerate_wn;

pub fn run() {
    let rows = load_appendix_table().unwrap();
    for row in &rows {
        let w = enumerate_wn(&row.n).unwrap();
        let fv = w.poset.face_vector();
        let simple = w.poset.is_simple();
        let mark = if fv == row.faces && simple == row.simple { "ok" } else { "MISMATCH" };
        println!("{:<5} {:<16} simple={:<5} {mark}", row.label(), format!("{fv:?}"), simple);
        assert_eq!(mark, "ok");
    }
}

#[allow(dead_code)]
fn main() {
    run();
}
