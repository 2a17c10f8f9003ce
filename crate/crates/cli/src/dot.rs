//! Graphviz output; vertices of `M` are drawn filled grey.

use std::fmt::Write;

use turmlab::Instance;

pub fn to_dot(inst: &Instance) -> String {
    let mut s = String::new();
    writeln!(s, "graph G {{").unwrap();
    writeln!(s, "  node [shape=circle];").unwrap();
    for v in 0..inst.n() {
        if inst.m_set().contains(v) {
            writeln!(s, "  {v} [style=filled, fillcolor=grey];").unwrap();
        } else {
            writeln!(s, "  {v};").unwrap();
        }
    }
    for (u, v) in inst.graph().edges() {
        writeln!(s, "  {u} -- {v};").unwrap();
    }
    s.push_str("}\n");
    s
}
