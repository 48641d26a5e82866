//! Internal union-find used to quotient column and key sets.

use std::collections::BTreeMap;

/// Union-find over arbitrary ordered node values. Nodes must be added before
/// they are united; classes come back keyed by their least member.
#[derive(Debug, Default)]
pub(crate) struct UnionFind<T: Ord + Clone> {
    parent: BTreeMap<T, T>,
}

impl<T: Ord + Clone> UnionFind<T> {
    pub fn new() -> Self {
        UnionFind {
            parent: BTreeMap::new(),
        }
    }

    pub fn add(&mut self, node: T) {
        self.parent.entry(node.clone()).or_insert(node);
    }

    pub fn find(&mut self, node: &T) -> T {
        let parent = self.parent.get(node).cloned().unwrap_or_else(|| {
            self.parent.insert(node.clone(), node.clone());
            node.clone()
        });
        if parent == *node {
            return parent;
        }
        let root = self.find(&parent);
        self.parent.insert(node.clone(), root.clone());
        root
    }

    pub fn union(&mut self, a: &T, b: &T) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return;
        }
        // keep the smaller value as the root so representatives are least
        if ra < rb {
            self.parent.insert(rb, ra);
        } else {
            self.parent.insert(ra, rb);
        }
    }

    /// All classes, keyed by least member, members sorted.
    pub fn classes(&mut self) -> BTreeMap<T, Vec<T>> {
        let nodes: Vec<T> = self.parent.keys().cloned().collect();
        let mut out: BTreeMap<T, Vec<T>> = BTreeMap::new();
        for node in nodes {
            let root = self.find(&node);
            out.entry(root).or_default().push(node);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn least_member_is_representative() {
        let mut uf: UnionFind<(String, String)> = UnionFind::new();
        let a = ("b".to_string(), "x".to_string());
        let b = ("a".to_string(), "y".to_string());
        let c = ("c".to_string(), "z".to_string());
        uf.add(a.clone());
        uf.add(b.clone());
        uf.add(c.clone());
        uf.union(&a, &b);
        let classes = uf.classes();
        assert_eq!(classes.len(), 2);
        assert!(classes.contains_key(&b));
        assert_eq!(classes[&b].len(), 2);
    }
}
