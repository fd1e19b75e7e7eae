use crate::categories::Tree;
use crate::thompson::FElement;

/// A closed trivalent planar multigraph with a fixed embedding.
///
/// Edge `e` has half-edges `2e` (at `endpoints[e][0]`) and `2e + 1` (at
/// `endpoints[e][1]`). `rotation[v]` lists the half-edges around `v` in
/// counter-clockwise order. Vertex-free diagrams are a number of free loops.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedDiagram {
    endpoints: Vec<[usize; 2]>,
    rotation: Vec<[usize; 3]>,
    free_loops: usize,
}

#[derive(Default)]
struct Builder {
    endpoints: Vec<[usize; 2]>,
    slots: Vec<[usize; 3]>,
}

const UNSET: usize = usize::MAX;
const PARENT: usize = 0;
const LEFT: usize = 1;
const RIGHT: usize = 2;

impl Builder {
    fn vertex(&mut self) -> usize {
        self.slots.push([UNSET; 3]);
        self.slots.len() - 1
    }

    fn edge(&mut self, (a, sa): (usize, usize), (b, sb): (usize, usize)) {
        let e = self.endpoints.len();
        self.endpoints.push([a, b]);
        self.slots[a][sa] = 2 * e;
        self.slots[b][sb] = 2 * e + 1;
    }

    /// Adds the internal vertices of `t`; returns the root vertex and, for each
    /// leaf, the (vertex, slot) it hangs from.
    fn tree(&mut self, t: &Tree, leaves: &mut Vec<(usize, usize)>) -> usize {
        let Tree::Node(l, r) = t else {
            panic!("tree() is called on internal vertices only");
        };
        let v = self.vertex();
        for (child, slot) in [(l, LEFT), (r, RIGHT)] {
            if child.is_leaf() {
                leaves.push((v, slot));
            } else {
                let w = self.tree(child, leaves);
                self.edge((v, slot), (w, PARENT));
            }
        }
        v
    }
}

impl ClosedDiagram {
    /// Glues `bottom` to the reflection of `top` along their leaves and joins
    /// the two roots by one edge.
    pub fn from_trees(bottom: &Tree, top: &Tree) -> ClosedDiagram {
        assert_eq!(bottom.leaves(), top.leaves(), "glued trees need equal leaf counts");
        if bottom.is_leaf() {
            return ClosedDiagram::free_loops(1);
        }
        let mut b = Builder::default();
        let mut bottom_leaves = Vec::new();
        let mut top_leaves = Vec::new();
        let bottom_root = b.tree(bottom, &mut bottom_leaves);
        let split = b.slots.len();
        let top_root = b.tree(top, &mut top_leaves);
        for (&x, &y) in bottom_leaves.iter().zip(&top_leaves) {
            b.edge(x, y);
        }
        b.edge((bottom_root, PARENT), (top_root, PARENT));
        // Counter-clockwise: the lower tree grows upward, the upper tree is its mirror image.
        let rotation = b
            .slots
            .iter()
            .enumerate()
            .map(|(v, s)| if v < split { [s[PARENT], s[RIGHT], s[LEFT]] } else { [s[PARENT], s[LEFT], s[RIGHT]] })
            .collect();
        ClosedDiagram {
            endpoints: b.endpoints,
            rotation,
            free_loops: 0,
        }
    }

    pub fn free_loops(count: usize) -> ClosedDiagram {
        ClosedDiagram {
            endpoints: Vec::new(),
            rotation: Vec::new(),
            free_loops: count,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.rotation.len()
    }

    pub fn edge_count(&self) -> usize {
        self.endpoints.len()
    }

    pub fn loop_count(&self) -> usize {
        self.free_loops
    }

    pub fn endpoints(&self) -> &[[usize; 2]] {
        &self.endpoints
    }

    fn tail(&self, h: usize) -> usize {
        self.endpoints[h / 2][h % 2]
    }

    fn next_around(&self, h: usize) -> usize {
        let r = &self.rotation[self.tail(h)];
        let i = r.iter().position(|&x| x == h).expect("half-edge in rotation");
        r[(i + 1) % 3]
    }

    /// Face index of every half-edge.
    pub fn face_labels(&self) -> (usize, Vec<usize>) {
        let mut label = vec![usize::MAX; 2 * self.edge_count()];
        let mut faces = 0;
        for start in 0..label.len() {
            if label[start] != usize::MAX {
                continue;
            }
            let mut h = start;
            while label[h] == usize::MAX {
                label[h] = faces;
                h = self.next_around(h ^ 1);
            }
            faces += 1;
        }
        (faces, label)
    }

    pub fn face_count(&self) -> usize {
        if self.vertex_count() == 0 {
            return self.free_loops + 1;
        }
        self.face_labels().0
    }

    /// The dual multigraph: one vertex per face, one edge per diagram edge
    /// joining the faces on its two sides.
    pub fn dual(&self) -> (usize, Vec<(usize, usize)>) {
        if self.vertex_count() == 0 {
            // nested free loops are not modelled; a single loop separates two faces
            assert!(self.free_loops <= 1, "only a single free loop is supported");
            return if self.free_loops == 1 { (2, vec![(0, 1)]) } else { (1, Vec::new()) };
        }
        let (faces, label) = self.face_labels();
        let edges = (0..self.edge_count()).map(|e| (label[2 * e], label[2 * e + 1])).collect();
        (faces, edges)
    }

    /// `V - E + F`, which is 2 for a connected planar embedding (a single
    /// free loop counts as one edge-free component with two faces).
    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64 + self.face_count() as i64
    }

    pub fn is_cubic(&self) -> bool {
        let mut deg = vec![0usize; self.vertex_count()];
        for [a, b] in &self.endpoints {
            deg[*a] += 1;
            deg[*b] += 1;
        }
        deg.iter().all(|&d| d == 3)
    }
}

/// The closed diagram of an `F` element: its range tree glued to its domain tree.
pub fn closed_graph(g: &FElement) -> ClosedDiagram {
    ClosedDiagram::from_trees(g.range(), g.domain())
}
