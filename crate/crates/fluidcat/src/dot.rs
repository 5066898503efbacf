//! Graphviz DOT renderings.

use std::fmt::Write;

use fluidcat_core::bundle::TowerBundle;
use fluidcat_core::thick::ThickCategory;
use fluidcat_core::tower::Tower;
use fluidcat_core::InfoSpace;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// The undirected ε-graph.
pub fn eps_graph(space: &InfoSpace, epsilon: f64) -> fluidcat_core::Result<String> {
    let g = space.eps_graph(epsilon)?;
    let mut out = format!("graph eps_graph {{\n  label={};\n", quote(&format!("ε = {epsilon}")));
    for a in space.atoms() {
        let _ = writeln!(out, "  {};", quote(space.name(a)));
    }
    for (a, b) in &g.edges {
        let _ = writeln!(out, "  {} -- {};", quote(space.name(*a)), quote(space.name(*b)));
    }
    out.push_str("}\n");
    Ok(out)
}

/// Thick-point categories, one cluster per level; identities are omitted.
pub fn system(space: &InfoSpace, levels: &[ThickCategory]) -> String {
    let mut out = String::from("digraph system {\n  compound=true;\n");
    for level in levels {
        let p = level.level;
        let _ = writeln!(out, "  subgraph cluster_level{p} {{\n    label={};", quote(&format!("level {p}")));
        for tp in &level.points {
            let label = format!("{}: {}", space.name(tp.core()), space.display_set(&tp.members()));
            let _ =
                writeln!(out, "    {} [label={}];", quote(&format!("L{p}:{}", space.name(tp.core()))), quote(&label));
        }
        for m in level.category.morphism_ids() {
            let (from, to) = level.ends(m);
            if from != to {
                let _ = writeln!(
                    out,
                    "    {} -> {};",
                    quote(&format!("L{p}:{}", space.name(from))),
                    quote(&format!("L{p}:{}", space.name(to)))
                );
            }
        }
        out.push_str("  }\n");
    }
    for pair in levels.windows(2) {
        for tp in &pair[0].points {
            let name = space.name(tp.core());
            let _ = writeln!(
                out,
                "  {} -> {} [style=dashed, label=\"δ\"];",
                quote(&format!("L{}:{name}", pair[0].level)),
                quote(&format!("L{}:{name}", pair[1].level))
            );
        }
    }
    out.push_str("}\n");
    out
}

/// Each tower as a cone: feet at the bottom, sections rising to the top.
pub fn towers(space: &InfoSpace, towers: &[(String, &Tower)]) -> String {
    let mut out = String::from("digraph towers {\n  rankdir=BT;\n");
    for (t, (name, tower)) in towers.iter().enumerate() {
        let _ = writeln!(out, "  subgraph cluster_t{t} {{\n    label={};", quote(name));
        for (f, foot) in tower.feet().iter().enumerate() {
            let label = format!("{}_{}: {}", space.name(foot.core()), foot.level(), space.display_set(&foot.members()));
            let _ = writeln!(out, "    t{t}f{f} [shape=invtriangle, label={}];", quote(&label));
            let _ = writeln!(out, "    t{t}f{f} -> t{t}s0;");
        }
        for (i, s) in tower.sections().iter().enumerate() {
            let intensities: Vec<String> =
                s.intensities().iter().map(|(&a, v)| format!("{}:{v}", space.name(a))).collect();
            let _ = writeln!(
                out,
                "    t{t}s{i} [shape=box, label={}];",
                quote(&format!("S{i} {{{}}}", intensities.join(", ")))
            );
            if i > 0 {
                let _ = writeln!(out, "    t{t}s{} -> t{t}s{i};", i - 1);
            }
        }
        out.push_str("  }\n");
    }
    out.push_str("}\n");
    out
}

/// Fibers drawn above their base objects, with the projection as dotted
/// edges.
pub fn bundle(bundle: &TowerBundle) -> String {
    let base = bundle.base();
    let mut out = String::from("digraph bundle {\n  rankdir=BT;\n  newrank=true;\n");
    out.push_str("  subgraph cluster_base {\n    label=\"base\";\n");
    for o in base.objects() {
        let _ = writeln!(out, "    b{} [label={}];", o.0, quote(base.object_label(o)));
    }
    for m in base.morphism_ids() {
        let (s, t) = (base.src(m), base.dst(m));
        if s != t {
            let _ = writeln!(out, "    b{} -> b{};", s.0, t.0);
        }
    }
    out.push_str("  }\n");
    for o in base.objects() {
        let _ = writeln!(
            out,
            "  subgraph cluster_fiber{} {{\n    label={};",
            o.0,
            quote(&format!("fiber over {}", base.object_label(o)))
        );
        for e in bundle.elements.over(o) {
            let (_, t) = bundle.elements.elements[e.0];
            let _ = writeln!(out, "    e{} [label=\"T{}\"];", e.0, t.0);
        }
        out.push_str("  }\n");
    }
    for e in bundle.elements.category.objects() {
        let (b, _) = bundle.elements.elements[e.0];
        let _ = writeln!(out, "  e{} -> b{} [style=dotted, arrowhead=none];", e.0, b.0);
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use fluidcat_core::bundle::{build_bundle, build_chi_p, Generators};
    use fluidcat_core::thick::DirectedSystem;

    fn l5() -> InfoSpace {
        InfoSpace::from_line(&["a", "b", "c", "d", "e"], &[0.0, 1.0, 2.0, 3.0, 10.0]).unwrap()
    }

    #[test]
    fn eps_graph_edges() {
        let dot = eps_graph(&l5(), 1.5).unwrap();
        assert_eq!(dot.matches(" -- ").count(), 3);
        assert!(dot.starts_with("graph ") && dot.ends_with("}\n"));
    }

    #[test]
    fn system_has_one_cluster_per_level() {
        let s = l5();
        let sys = DirectedSystem::build(&s, 1.5, 2).unwrap();
        let dot = system(&s, &sys.levels);
        assert_eq!(dot.matches("subgraph cluster_level").count(), 3);
        assert_eq!(dot.matches("label=\"δ\"").count(), 10);
    }

    #[test]
    fn bundle_projection_edges() {
        let s = l5();
        let sys = DirectedSystem::build(&s, 1.5, 1).unwrap();
        let b = build_bundle(build_chi_p(&s, &sys, 1, &Generators::new()).unwrap()).unwrap();
        let dot = bundle(&b);
        assert_eq!(dot.matches("style=dotted").count(), 5);
        assert_eq!(dot.matches("subgraph cluster_fiber").count(), 5);
    }

    #[test]
    fn quoting() {
        assert_eq!(quote("a\"b"), "\"a\\\"b\"");
    }
}
