//! SVG drawings of partitions, labeled plane trees and parking trees.

use std::f64::consts::PI;
use std::fmt::Write;

use crate::parking_tree::{DParkingTree, ParkingNode, VertexLabel};
use crate::partition::NoncrossingPartition;
use crate::plane_tree::{LabeledPlaneTree, LabeledVertex};

const STYLE: &str = "font-family=\"sans-serif\" font-size=\"12\"";

fn header(w: f64, h: f64) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.0}\" height=\"{h:.0}\" viewBox=\"0 0 {w:.0} {h:.0}\" {STYLE}>\n"
    )
}

fn point(cx: f64, cy: f64, r: f64, angle: f64) -> (f64, f64) {
    (cx + r * angle.cos(), cy - r * angle.sin())
}

fn polygon(out: &mut String, pts: &[(f64, f64)], dashed: bool) {
    let dash = if dashed { " stroke-dasharray=\"5,4\"" } else { "" };
    let coords: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.1},{y:.1}")).collect();
    match pts.len() {
        0 | 1 => {}
        2 => {
            let _ = writeln!(
                out,
                "<polyline points=\"{}\" fill=\"none\" stroke=\"black\"{dash}/>",
                coords.join(" ")
            );
        }
        _ => {
            let fill = if dashed { "none" } else { "#dddddd" };
            let _ = writeln!(
                out,
                "<polygon points=\"{}\" fill=\"{fill}\" stroke=\"black\"{dash}/>",
                coords.join(" ")
            );
        }
    }
}

/// Points `1..n` clockwise from the top of a circle, blocks as solid
/// polygons; dual points `i'` sit between `i` and `i+1`, dual blocks dashed.
pub fn partition_circle(pi: &NoncrossingPartition) -> String {
    let n = pi.n();
    let (size, cx, cy, r) = (360.0, 180.0, 180.0, 130.0);
    let angle = |pos: f64| PI / 2.0 - 2.0 * PI * pos / n as f64;
    let primal = |i: usize| point(cx, cy, r, angle((i - 1) as f64));
    let dual = |i: usize| point(cx, cy, r, angle(i as f64 - 0.5));
    let mut out = header(size, size);
    let _ = writeln!(
        out,
        "<circle cx=\"{cx}\" cy=\"{cy}\" r=\"{r}\" fill=\"none\" stroke=\"#999999\"/>"
    );
    for b in pi.blocks() {
        polygon(&mut out, &b.iter().map(|&i| primal(i)).collect::<Vec<_>>(), false);
    }
    for c in pi.kreweras_dual().blocks() {
        polygon(&mut out, &c.iter().map(|&i| dual(i)).collect::<Vec<_>>(), true);
    }
    for i in 1..=n {
        let (x, y) = primal(i);
        let _ = writeln!(out, "<circle cx=\"{x:.1}\" cy=\"{y:.1}\" r=\"3.5\" fill=\"black\"/>");
        let (lx, ly) = point(cx, cy, r + 16.0, angle((i - 1) as f64));
        let _ = writeln!(
            out,
            "<text x=\"{lx:.1}\" y=\"{ly:.1}\" text-anchor=\"middle\" dominant-baseline=\"middle\">{i}</text>"
        );
        let (x, y) = dual(i);
        let _ = writeln!(
            out,
            "<circle cx=\"{x:.1}\" cy=\"{y:.1}\" r=\"3\" fill=\"white\" stroke=\"black\"/>"
        );
        let (lx, ly) = point(cx, cy, r + 34.0, angle(i as f64 - 0.5));
        let _ = writeln!(
            out,
            "<text x=\"{lx:.1}\" y=\"{ly:.1}\" text-anchor=\"middle\" dominant-baseline=\"middle\" fill=\"#555555\">{i}&#8242;</text>"
        );
    }
    out.push_str("</svg>\n");
    out
}

struct Placed {
    x: f64,
    depth: usize,
    parent: Option<usize>,
    edge_label: String,
    node_label: String,
}

/// A tree with a label on each vertex and on each edge to a child.
struct Sketch {
    label: String,
    children: Vec<(String, Sketch)>,
}

/// Leaves get consecutive columns, parents are centered over children.
fn layout(root: &Sketch) -> Vec<Placed> {
    fn walk(
        v: &Sketch,
        depth: usize,
        parent: Option<usize>,
        edge_label: String,
        next_leaf: &mut f64,
        out: &mut Vec<Placed>,
    ) -> f64 {
        let me = out.len();
        out.push(Placed {
            x: 0.0,
            depth,
            parent,
            edge_label,
            node_label: v.label.clone(),
        });
        let x = if v.children.is_empty() {
            *next_leaf += 1.0;
            *next_leaf - 1.0
        } else {
            let xs: Vec<f64> = v
                .children
                .iter()
                .map(|(l, c)| walk(c, depth + 1, Some(me), l.clone(), next_leaf, out))
                .collect();
            (xs[0] + xs[xs.len() - 1]) / 2.0
        };
        out[me].x = x;
        x
    }
    let mut out = Vec::new();
    walk(root, 0, None, String::new(), &mut 0.0, &mut out);
    out
}

fn draw_tree(nodes: &[Placed], filled: impl Fn(&Placed) -> bool, radius: f64) -> String {
    let (dx, dy, margin) = (48.0, 70.0, 40.0);
    let width = nodes.iter().map(|p| p.x).fold(0.0, f64::max) * dx + 2.0 * margin;
    let height = nodes.iter().map(|p| p.depth).max().unwrap_or(0) as f64 * dy + 2.0 * margin;
    let pos = |p: &Placed| (margin + p.x * dx, margin + p.depth as f64 * dy);
    let mut out = header(width, height);
    for p in nodes {
        if let Some(parent) = p.parent {
            let (x1, y1) = pos(&nodes[parent]);
            let (x2, y2) = pos(p);
            let _ = writeln!(
                out,
                "<line x1=\"{x1:.1}\" y1=\"{y1:.1}\" x2=\"{x2:.1}\" y2=\"{y2:.1}\" stroke=\"black\"/>"
            );
            if !p.edge_label.is_empty() {
                let (mx, my) = ((x1 + x2) / 2.0, (y1 + y2) / 2.0);
                let _ = writeln!(
                    out,
                    "<text x=\"{:.1}\" y=\"{my:.1}\" text-anchor=\"middle\" fill=\"#1f4e9c\">{}</text>",
                    mx + 8.0,
                    p.edge_label
                );
            }
        }
    }
    for p in nodes {
        let (x, y) = pos(p);
        let fill = if filled(p) { "black" } else { "white" };
        let _ = writeln!(
            out,
            "<circle cx=\"{x:.1}\" cy=\"{y:.1}\" r=\"{radius}\" fill=\"{fill}\" stroke=\"black\"/>"
        );
        if !p.node_label.is_empty() {
            let _ = writeln!(
                out,
                "<text x=\"{x:.1}\" y=\"{y:.1}\" text-anchor=\"middle\" dominant-baseline=\"middle\">{}</text>",
                p.node_label
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

/// Black vertices at even depth, white at odd depth, `gamma` labels at the
/// middle of each edge.
pub fn labeled_plane_tree(tree: &LabeledPlaneTree) -> String {
    fn sketch(v: &LabeledVertex) -> Sketch {
        Sketch {
            label: String::new(),
            children: v.children.iter().map(|(l, c)| (l.to_string(), sketch(c))).collect(),
        }
    }
    let nodes = layout(&sketch(&tree.root));
    draw_tree(&nodes, |p| p.depth % 2 == 0, 6.0)
}

/// Labels `i_j` inside the vertices and DFS numbers beside them.
pub fn parking_tree(tree: &DParkingTree) -> String {
    fn sketch(v: &ParkingNode) -> Sketch {
        let label = match v.label {
            VertexLabel::Infinity => "&#8734;".to_string(),
            VertexLabel::Index { i, j } => {
                format!("{i}<tspan baseline-shift=\"sub\" font-size=\"9\">{j}</tspan>")
            }
        };
        Sketch {
            label,
            children: v.children.iter().map(|c| (String::new(), sketch(c))).collect(),
        }
    }
    let nodes = layout(&sketch(tree.root()));
    let mut svg = draw_tree(&nodes, |_| false, 14.0);
    // DFS numbers are the preorder positions, which is the order of `nodes`
    let (dx, dy, margin) = (48.0, 70.0, 40.0);
    let mut numbers = String::new();
    for (idx, p) in nodes.iter().enumerate() {
        let (x, y) = (margin + p.x * dx, margin + p.depth as f64 * dy);
        let _ = writeln!(
            numbers,
            "<text x=\"{:.1}\" y=\"{:.1}\" fill=\"#9c1f1f\" font-size=\"10\">{}</text>",
            x + 16.0,
            y - 12.0,
            idx + 1
        );
    }
    svg.insert_str(svg.len() - "</svg>\n".len(), &numbers);
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::DParkingFunction;
    use crate::parking_tree::parking_to_tree;
    use crate::plane_tree::partition_to_tree;

    #[test]
    fn circle_has_solid_and_dashed_shapes() {
        let pi: NoncrossingPartition = "1|2,9,10|3|4,5,6,7,8|11".parse().unwrap();
        let svg = partition_circle(&pi);
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<polygon").count(), 2 + 2);
        assert!(svg.contains("stroke-dasharray"));
        assert!(svg.contains("11&#8242;"));
    }

    #[test]
    fn trees_render() {
        let pi: NoncrossingPartition = "1,2|3".parse().unwrap();
        let svg = labeled_plane_tree(&partition_to_tree(&pi));
        assert_eq!(svg.matches("<circle").count(), 4);
        let pf = DParkingFunction::new(2, vec![2, 1, 3, 1, 3]).unwrap();
        let svg = parking_tree(&parking_to_tree(&pf));
        assert_eq!(svg.matches("<circle").count(), 11);
        assert!(svg.contains("&#8734;"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }
}
