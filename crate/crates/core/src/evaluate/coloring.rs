use num::BigInt;

use super::ClosedDiagram;

/// Orders edges so that each one (after the first) touches an earlier one, which
/// lets the backtracking search prune at shared vertices early.
fn bfs_edge_order(vertices: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut incident = vec![Vec::new(); vertices];
    for (e, &(a, b)) in edges.iter().enumerate() {
        incident[a].push(e);
        if b != a {
            incident[b].push(e);
        }
    }
    let mut seen_v = vec![false; vertices];
    let mut seen_e = vec![false; edges.len()];
    let mut order = Vec::with_capacity(edges.len());
    for root in 0..vertices {
        if seen_v[root] {
            continue;
        }
        seen_v[root] = true;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &e in &incident[v] {
                if seen_e[e] {
                    continue;
                }
                seen_e[e] = true;
                order.push(e);
                let (a, b) = edges[e];
                let w = if a == v { b } else { a };
                if !seen_v[w] {
                    seen_v[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    order
}

/// Number of proper edge colorings with `colors` colors: the edges at each
/// vertex receive pairwise distinct colors. Free loops contribute `colors` each.
pub fn edge_coloring_count(d: &ClosedDiagram, colors: usize) -> BigInt {
    assert!((1..=64).contains(&colors), "between 1 and 64 colors");
    let edges: Vec<(usize, usize)> = d.endpoints().iter().map(|&[a, b]| (a, b)).collect();
    let loop_factor = num::pow(BigInt::from(colors), d.loop_count());
    if edges.iter().any(|&(a, b)| a == b) {
        return BigInt::from(0);
    }
    let order = bfs_edge_order(d.vertex_count(), &edges);
    let mut used = vec![0u64; d.vertex_count()];
    let count = edge_search(&edges, &order, 0, colors, &mut used);
    BigInt::from(count) * loop_factor
}

fn edge_search(edges: &[(usize, usize)], order: &[usize], at: usize, colors: usize, used: &mut [u64]) -> u128 {
    let Some(&e) = order.get(at) else {
        return 1;
    };
    let (a, b) = edges[e];
    let mut total = 0u128;
    for c in 0..colors {
        let bit = 1u64 << c;
        if (used[a] | used[b]) & bit != 0 {
            continue;
        }
        used[a] |= bit;
        used[b] |= bit;
        total += edge_search(edges, order, at + 1, colors, used);
        used[a] &= !bit;
        used[b] &= !bit;
    }
    total
}

/// Number of proper vertex colorings of a multigraph with `colors` colors.
/// A self-loop makes the count zero.
pub fn vertex_coloring_count(vertices: usize, edges: &[(usize, usize)], colors: usize) -> BigInt {
    if edges.iter().any(|&(a, b)| a == b) {
        return BigInt::from(0);
    }
    let mut adj = vec![Vec::new(); vertices];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    // visit vertices in BFS order so that neighbours are colored early
    let mut order = Vec::with_capacity(vertices);
    let mut seen = vec![false; vertices];
    for root in 0..vertices {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    let mut color = vec![usize::MAX; vertices];
    BigInt::from(vertex_search(&adj, &order, 0, colors, &mut color))
}

fn vertex_search(adj: &[Vec<usize>], order: &[usize], at: usize, colors: usize, color: &mut [usize]) -> u128 {
    let Some(&v) = order.get(at) else {
        return 1;
    };
    let mut total = 0u128;
    for c in 0..colors {
        if adj[v].iter().any(|&w| color[w] == c) {
            continue;
        }
        color[v] = c;
        total += vertex_search(adj, order, at + 1, colors, color);
    }
    color[v] = usize::MAX;
    total
}

/// Number of proper `n`-colorings of the faces of the embedded diagram:
/// faces sharing an edge receive distinct colors.
pub fn face_coloring_count(d: &ClosedDiagram, n: usize) -> BigInt {
    let (faces, dual) = d.dual();
    vertex_coloring_count(faces, &dual, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::categories::Tree;
    use crate::evaluate::closed_graph;
    use crate::thompson::FElement;

    fn theta() -> ClosedDiagram {
        ClosedDiagram::from_trees(&Tree::caret(), &Tree::caret())
    }

    #[test]
    fn edge_counts() {
        assert_eq!(edge_coloring_count(&theta(), 3), 6.into());
        assert_eq!(edge_coloring_count(&closed_graph(&FElement::x0()), 3), 6.into());
        assert_eq!(edge_coloring_count(&ClosedDiagram::free_loops(1), 3), 3.into());
    }

    #[test]
    fn face_counts() {
        assert_eq!(face_coloring_count(&ClosedDiagram::free_loops(1), 3), 6.into());
        assert_eq!(face_coloring_count(&theta(), 3), 6.into());
        assert_eq!(face_coloring_count(&closed_graph(&FElement::x0()), 3), 0.into());
        assert_eq!(face_coloring_count(&closed_graph(&FElement::x0()), 4), 24.into());
    }

    #[test]
    fn brute_force_faces() {
        for n in 2..=5 {
            for a in Tree::enumerate(n) {
                for b in Tree::enumerate(n) {
                    let d = ClosedDiagram::from_trees(&a, &b);
                    let (faces, dual) = d.dual();
                    let mut brute = 0u64;
                    for code in 0..3u64.pow(faces as u32) {
                        let col: Vec<u64> = (0..faces).map(|i| code / 3u64.pow(i as u32) % 3).collect();
                        if dual.iter().all(|&(x, y)| col[x] != col[y]) {
                            brute += 1;
                        }
                    }
                    assert_eq!(face_coloring_count(&d, 3), brute.into(), "{a}|{b}");
                }
            }
        }
    }
}
