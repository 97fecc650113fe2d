//! CART with Gini impurity for binary labels.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeParams {
    pub max_depth: usize,
    pub min_samples_split: usize,
    pub min_samples_leaf: usize,
}

impl Default for TreeParams {
    fn default() -> Self {
        Self { max_depth: 20, min_samples_split: 2, min_samples_leaf: 1 }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Leaf { class: u8 },
    Split { feature: usize, threshold: f64, left: usize, right: usize },
}

/// Binary decision tree stored as a node arena; node 0 is the root.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionTree {
    nodes: Vec<Node>,
}

struct Split {
    feature: usize,
    threshold: f64,
    impurity: f64,
}

fn gini(pos: usize, n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let p = pos as f64 / n as f64;
    2.0 * p * (1.0 - p)
}

impl DecisionTree {
    /// Grows a tree on row-major `x`. A node becomes a leaf when it is pure,
    /// too small to split, at `max_depth`, or has no split that lowers the
    /// weighted impurity. Leaves predict the majority label (0 on ties).
    pub fn fit(x: &[Vec<f64>], y: &[u8], params: TreeParams) -> Self {
        let mut tree = Self { nodes: Vec::new() };
        let indices: Vec<usize> = (0..y.len()).collect();
        tree.grow(x, y, indices, 0, &params);
        tree
    }

    fn grow(&mut self, x: &[Vec<f64>], y: &[u8], indices: Vec<usize>, depth: usize, params: &TreeParams) -> usize {
        let id = self.nodes.len();
        let n = indices.len();
        let pos = indices.iter().filter(|&&i| y[i] == 1).count();
        let class = u8::from(pos * 2 > n);
        self.nodes.push(Node::Leaf { class });

        if pos == 0 || pos == n || depth >= params.max_depth || n < params.min_samples_split {
            return id;
        }
        let Some(split) = best_split(x, y, &indices, pos, params.min_samples_leaf) else {
            return id;
        };
        if split.impurity >= gini(pos, n) {
            return id;
        }
        let (left, right): (Vec<usize>, Vec<usize>) =
            indices.into_iter().partition(|&i| x[i][split.feature] <= split.threshold);
        let l = self.grow(x, y, left, depth + 1, params);
        let r = self.grow(x, y, right, depth + 1, params);
        self.nodes[id] = Node::Split { feature: split.feature, threshold: split.threshold, left: l, right: r };
        id
    }

    pub fn predict(&self, row: &[f64]) -> u8 {
        let mut id = 0;
        loop {
            match self.nodes[id] {
                Node::Leaf { class } => return class,
                Node::Split { feature, threshold, left, right } => {
                    id = if row[feature] <= threshold { left } else { right };
                }
            }
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn n_leaves(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, Node::Leaf { .. })).count()
    }

    pub fn depth(&self) -> usize {
        fn walk(nodes: &[Node], id: usize) -> usize {
            match nodes[id] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + walk(nodes, left).max(walk(nodes, right)),
            }
        }
        walk(&self.nodes, 0)
    }
}

/// Lowest weighted Gini over all features and midpoints between distinct
/// consecutive values. Earlier features and lower thresholds win ties.
fn best_split(x: &[Vec<f64>], y: &[u8], indices: &[usize], total_pos: usize, min_leaf: usize) -> Option<Split> {
    let n = indices.len();
    let n_features = x[indices[0]].len();
    let mut best: Option<Split> = None;
    let mut order = indices.to_vec();

    #[allow(clippy::needless_range_loop)]
    for feature in 0..n_features {
        order.sort_by(|&a, &b| x[a][feature].total_cmp(&x[b][feature]));
        let mut left_pos = 0;
        for k in 0..n - 1 {
            left_pos += usize::from(y[order[k]] == 1);
            let left_n = k + 1;
            let (v, next) = (x[order[k]][feature], x[order[k + 1]][feature]);
            if v == next || left_n < min_leaf || n - left_n < min_leaf {
                continue;
            }
            let right_n = n - left_n;
            let impurity = (left_n as f64 * gini(left_pos, left_n) + right_n as f64 * gini(total_pos - left_pos, right_n)) / n as f64;
            if best.as_ref().is_none_or(|b| impurity < b.impurity) {
                let mid = v + (next - v) / 2.0;
                let threshold = if mid < next { mid } else { v };
                best = Some(Split { feature, threshold, impurity });
            }
        }
    }
    best
}
