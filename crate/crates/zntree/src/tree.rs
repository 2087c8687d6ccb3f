//! The tree of cosets built from a length function restricted to one height
//! level, Chiswell-style: paths from the base coset glued along projected
//! Gromov products. Within a level the metric is the single coordinate just
//! above the level, so path lengths are plain integers.
//!
//! Everything carries an explicit finite window. Answers that would need
//! vertices outside the materialized window are errors, never guesses: the
//! true tree is infinite.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{Ball, GroupModel, Word};
use crate::length::LengthFunction;
use crate::lexvec::HalfVec;

/// One coset `g G_k` within the window; the representative is the
/// shortlex-least member seen.
#[derive(Debug, Clone)]
pub struct Coset {
    pub rep: Word,
    pub members: Vec<Word>,
}

/// Partitions the ball into cosets of the height-`k` subgroup:
/// `g ~ h  iff  ht(l(g^-1 h)) <= k`.
pub fn coset_partition(lf: &LengthFunction, ball: &Ball, k: usize) -> Result<Vec<Coset>> {
    if k == 0 || k > lf.arity() {
        return Err(Error::InvalidArgument(format!(
            "coset level must be in 1..={}, got {k}",
            lf.arity()
        )));
    }
    let mut cosets: Vec<Coset> = Vec::new();
    let mut inv_reps: Vec<Word> = Vec::new();
    for w in ball.iter() {
        let mut placed = false;
        for (i, _) in cosets.iter().enumerate() {
            let diff = lf.model().multiply(&inv_reps[i], w)?;
            if lf.height_of(&diff)? <= k {
                cosets[i].members.push(w.clone());
                placed = true;
                break;
            }
        }
        if !placed {
            inv_reps.push(lf.model().invert(w)?);
            cosets.push(Coset {
                rep: w.clone(),
                members: vec![w.clone()],
            });
        }
    }
    Ok(cosets)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum NodeKind {
    Labeled,
    PathPoint,
}

#[derive(Debug, Clone)]
pub struct Node {
    /// class representative: (coset index, distance from base on its path)
    pub key: (usize, i128),
    pub coset: Option<usize>,
}

/// Result of classifying one isometry of the level tree.
#[derive(Debug, Clone)]
pub enum IsometryClass {
    Elliptic {
        fixed: usize,
    },
    Inversion {
        edge: (usize, usize),
    },
    Hyperbolic {
        translation: i128,
        axis: Vec<usize>,
    },
    /// The window was too small to certify a class.
    Inconclusive {
        min_displacement_found: Option<i128>,
    },
}

#[derive(Debug, Clone)]
pub struct IsometryReport {
    pub class: IsometryClass,
    pub min_displacement: Option<i128>,
    /// `l_k(g^2) - l_k(g)`, the formula route to the translation length.
    pub formula_translation: i128,
    /// `l_k(g^2) > l_k(g)`, the shortcut route to hyperbolicity.
    pub shortcut_hyperbolic: bool,
    /// Brute-force class agrees with the shortcut.
    pub consistent: bool,
    pub nodes_checked: usize,
}

/// The materialized level tree: labeled vertices for every coset in the
/// window, synthetic path points only where a position on a path is realized
/// by no coset, and unit edges between consecutive positions.
#[derive(Debug, Clone)]
pub struct CosetTree {
    pub level: usize,
    pub radius: u32,
    pub cosets: Vec<Coset>,
    pub depths: Vec<i128>,
    pub nodes: Vec<Node>,
    pub edges: Vec<(usize, usize)>,
    pub base: usize,
    /// level Gromov products between cosets (integer branch depths)
    products: Vec<Vec<i128>>,
    labeled_node: Vec<usize>,
}

/// Builds the level-`k` coset tree over the window. Refuses construction,
/// with a witness, if the level data is not 0-hyperbolic or some level
/// product is not an integer: both break the unit-edge tree and indicate a
/// regularity failure at this level.
pub fn build_coset_tree(lf: &LengthFunction, ball: &Ball, k: usize) -> Result<CosetTree> {
    let n = lf.arity();
    if k == 0 || k >= n {
        return Err(Error::InvalidArgument(format!(
            "tree level must be in 1..={}, got {k}",
            n.saturating_sub(1)
        )));
    }
    let all = coset_partition(lf, ball, k)?;
    // Only cosets inside the next height slice carry integer level lengths.
    let mut cosets = Vec::new();
    for c in all {
        if lf.evaluate(&c.rep)?.height().0 <= k + 1 {
            cosets.push(c);
        }
    }
    let m = cosets.len();
    let render = |w: &Word| lf.model().render_word(w);

    let mut depths = Vec::with_capacity(m);
    for c in &cosets {
        let d = lf.level_value(&c.rep, k)?;
        for member in &c.members {
            let dm = lf.level_value(member, k)?;
            if dm != d {
                return Err(Error::TreeRefused {
                    level: k,
                    detail: format!(
                        "members {} and {} of one coset have level lengths {d} and {dm}",
                        render(&c.rep),
                        render(member)
                    ),
                });
            }
        }
        depths.push(d);
    }

    let mut products = vec![vec![0i128; m]; m];
    for i in 0..m {
        products[i][i] = depths[i];
        for j in (i + 1)..m {
            let d = lf.level_value(
                &lf.model()
                    .multiply(&lf.model().invert(&cosets[i].rep)?, &cosets[j].rep)?,
                k,
            )?;
            let doubled = depths[i] + depths[j] - d;
            if doubled.rem_euclid(2) != 0 {
                return Err(Error::TreeRefused {
                    level: k,
                    detail: format!(
                        "non-integral level product between {} and {} (2c = {doubled}); \
                         the level is not 0-regular on this window",
                        render(&cosets[i].rep),
                        render(&cosets[j].rep)
                    ),
                });
            }
            let c = doubled / 2;
            if c < 0 || c > depths[i].min(depths[j]) {
                return Err(Error::TreeRefused {
                    level: k,
                    detail: format!(
                        "level product {c} between {} and {} falls outside [0, min depth]; \
                         level axioms fail on this window",
                        render(&cosets[i].rep),
                        render(&cosets[j].rep)
                    ),
                });
            }
            products[i][j] = c;
            products[j][i] = c;
        }
    }
    for f in 0..m {
        for g in 0..m {
            for h in 0..m {
                if products[f][g] < products[f][h].min(products[g][h]) {
                    return Err(Error::TreeRefused {
                        level: k,
                        detail: format!(
                            "level products are not 0-hyperbolic on the triple ({}, {}, {}): \
                             c({f},{g})={} < min(c({f},{h})={}, c({g},{h})={})",
                            render(&cosets[f].rep),
                            render(&cosets[g].rep),
                            render(&cosets[h].rep),
                            products[f][g],
                            products[f][h],
                            products[g][h],
                        ),
                    });
                }
            }
        }
    }

    // Class of position d on the path to coset i: all cosets whose path
    // shares that position. 0-hyperbolicity makes the representative map
    // consistent.
    let class_rep = |i: usize, d: i128| -> (usize, i128) {
        let mut rep = i;
        for j in 0..m {
            if products[i][j] >= d && j < rep {
                rep = j;
            }
        }
        (rep, d)
    };
    let mut keys: BTreeSet<(i128, usize)> = BTreeSet::new();
    for i in 0..m {
        for d in 0..=depths[i] {
            let (rep, d) = class_rep(i, d);
            keys.insert((d, rep));
        }
    }
    let node_ids: BTreeMap<(i128, usize), usize> = keys
        .iter()
        .enumerate()
        .map(|(id, &key)| (key, id))
        .collect();
    let mut nodes: Vec<Node> = keys
        .iter()
        .map(|&(d, rep)| Node {
            key: (rep, d),
            coset: None,
        })
        .collect();
    let mut labeled_node = vec![usize::MAX; m];
    for i in 0..m {
        let (rep, d) = class_rep(i, depths[i]);
        let id = node_ids[&(d, rep)];
        if nodes[id].coset.is_some() {
            return Err(Error::TreeRefused {
                level: k,
                detail: format!(
                    "distinct cosets {} and {} collapse to one vertex",
                    render(&cosets[nodes[id].coset.unwrap()].rep),
                    render(&cosets[i].rep)
                ),
            });
        }
        nodes[id].coset = Some(i);
        labeled_node[i] = id;
    }
    let mut edge_set: BTreeSet<(usize, usize)> = BTreeSet::new();
    for i in 0..m {
        for d in 1..=depths[i] {
            let (ra, da) = class_rep(i, d - 1);
            let (rb, db) = class_rep(i, d);
            let a = node_ids[&(da, ra)];
            let b = node_ids[&(db, rb)];
            edge_set.insert((a.min(b), a.max(b)));
        }
    }
    let edges: Vec<(usize, usize)> = edge_set.into_iter().collect();
    debug_assert_eq!(edges.len() + 1, nodes.len(), "a tree has V-1 edges");
    let base = node_ids[&(0, class_rep(0, 0).0)];

    Ok(CosetTree {
        level: k,
        radius: ball.radius,
        cosets,
        depths,
        nodes,
        edges,
        base,
        products,
        labeled_node,
    })
}

impl CosetTree {
    pub fn labeled_count(&self) -> usize {
        self.cosets.len()
    }

    pub fn path_point_count(&self) -> usize {
        self.nodes.len() - self.cosets.len()
    }

    pub fn node_of_coset(&self, coset: usize) -> usize {
        self.labeled_node[coset]
    }

    /// Tree distance between materialized vertices, from the class data.
    pub fn distance(&self, a: usize, b: usize) -> i128 {
        let (i, da) = self.nodes[a].key;
        let (j, db) = self.nodes[b].key;
        da + db - 2 * da.min(db).min(self.products[i][j])
    }

    /// The coset of an arbitrary word, when it lies in the window.
    pub fn coset_of(&self, lf: &LengthFunction, w: &Word) -> Result<Option<usize>> {
        for (i, c) in self.cosets.iter().enumerate() {
            let diff = lf.model().multiply(&lf.model().invert(&c.rep)?, w)?;
            if lf.height_of(&diff)? <= self.level {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    /// Left multiplication on vertices. Labeled cosets map to labeled
    /// cosets; path points are interpolated between the images of their
    /// segment endpoints. Out-of-window images are explicit errors.
    pub fn act(&self, lf: &LengthFunction, g: &Word, node: usize) -> Result<usize> {
        let (i, d) = self.nodes[node].key;
        if let Some(ci) = self.nodes[node].coset {
            let moved = lf.model().multiply(g, &self.cosets[ci].rep)?;
            let target = self.coset_of(lf, &moved)?.ok_or_else(|| {
                Error::OutOfWindow(format!(
                    "image coset of {} is not materialized",
                    lf.model().render_word(&moved)
                ))
            })?;
            return Ok(self.labeled_node[target]);
        }
        // path point at depth d on [base, coset i]
        let base_img = self.coset_of(lf, g)?;
        let tip = lf.model().multiply(g, &self.cosets[i].rep)?;
        let tip_img = self.coset_of(lf, &tip)?;
        let (u, v) = match (base_img, tip_img) {
            (Some(u), Some(v)) => (self.labeled_node[u], self.labeled_node[v]),
            _ => {
                return Err(Error::OutOfWindow(
                    "segment endpoints of a path point are not both materialized".into(),
                ))
            }
        };
        let total = self.distance(u, v);
        for q in 0..self.nodes.len() {
            if self.distance(u, q) == d && self.distance(q, v) == total - d {
                return Ok(q);
            }
        }
        Err(Error::OutOfWindow(
            "interpolated path-point image is not materialized".into(),
        ))
    }

    /// Brute-force trichotomy with the formula shortcut as a cross-check:
    /// displacements are minimized over all materialized vertices, an edge
    /// swap is an inversion, and a window that cannot certify the class
    /// yields an inconclusive answer instead of a guess.
    pub fn classify_isometry(&self, lf: &LengthFunction, g: &Word) -> Result<IsometryReport> {
        let g2 = lf.model().power(g, 2)?;
        let lk_g = lf.level_value(g, self.level)?;
        let lk_g2 = lf.level_value(&g2, self.level)?;
        let shortcut_hyperbolic = lk_g2 > lk_g;
        let formula_translation = lk_g2 - lk_g;

        let mut images: Vec<Option<usize>> = Vec::with_capacity(self.nodes.len());
        for node in 0..self.nodes.len() {
            match self.act(lf, g, node) {
                Ok(img) => images.push(Some(img)),
                Err(Error::OutOfWindow(_)) => images.push(None),
                Err(e) => return Err(e),
            }
        }
        let mut min_disp: Option<(i128, usize)> = None;
        let mut checked = 0usize;
        for (node, img) in images.iter().enumerate() {
            if let Some(img) = img {
                checked += 1;
                let disp = self.distance(node, *img);
                if min_disp.is_none_or(|(best, _)| disp < best) {
                    min_disp = Some((disp, node));
                }
            }
        }
        let class = match min_disp {
            Some((0, node)) => IsometryClass::Elliptic { fixed: node },
            Some((min, _)) => {
                let swapped = self
                    .edges
                    .iter()
                    .find(|&&(u, v)| images[u] == Some(v) && images[v] == Some(u));
                if let Some(&edge) = swapped {
                    IsometryClass::Inversion { edge }
                } else if shortcut_hyperbolic && min == formula_translation {
                    let mut axis: BTreeSet<usize> = BTreeSet::new();
                    for (node, img) in images.iter().enumerate() {
                        if let Some(img) = img {
                            if self.distance(node, *img) == min {
                                for q in 0..self.nodes.len() {
                                    if self.distance(node, q) + self.distance(q, *img) == min {
                                        axis.insert(q);
                                    }
                                }
                            }
                        }
                    }
                    IsometryClass::Hyperbolic {
                        translation: min,
                        axis: axis.into_iter().collect(),
                    }
                } else {
                    IsometryClass::Inconclusive {
                        min_displacement_found: Some(min),
                    }
                }
            }
            None => IsometryClass::Inconclusive {
                min_displacement_found: None,
            },
        };
        let consistent = match &class {
            IsometryClass::Elliptic { .. } => !shortcut_hyperbolic,
            IsometryClass::Hyperbolic { .. } => shortcut_hyperbolic,
            IsometryClass::Inversion { .. } => false,
            IsometryClass::Inconclusive { .. } => true,
        };
        Ok(IsometryReport {
            class,
            min_displacement: min_disp.map(|(d, _)| d),
            formula_translation,
            shortcut_hyperbolic,
            consistent,
            nodes_checked: checked,
        })
    }

    /// Deterministic DOT rendering: labeled vertices as boxes with their
    /// representatives, path points as dots, base doubly outlined.
    pub fn to_dot(&self, model: &GroupModel) -> String {
        let mut out = String::from("graph coset_tree {\n  node [shape=box];\n");
        for (id, node) in self.nodes.iter().enumerate() {
            match node.coset {
                Some(c) => {
                    let label = model.render_word(&self.cosets[c].rep);
                    if id == self.base {
                        out.push_str(&format!("  n{id} [label=\"{label}\", peripheries=2];\n"));
                    } else {
                        out.push_str(&format!("  n{id} [label=\"{label}\"];\n"));
                    }
                }
                None => out.push_str(&format!("  n{id} [shape=point];\n")),
            }
        }
        for &(a, b) in &self.edges {
            out.push_str(&format!("  n{a} -- n{b};\n"));
        }
        out.push_str("}\n");
        out
    }

    pub fn view(&self, model: &GroupModel) -> TreeView {
        TreeView {
            level: self.level,
            radius: self.radius,
            vertex_count: self.nodes.len(),
            labeled_count: self.labeled_count(),
            path_point_count: self.path_point_count(),
            edge_count: self.edges.len(),
            base: self.base,
            vertices: self
                .nodes
                .iter()
                .enumerate()
                .map(|(id, n)| VertexView {
                    id,
                    kind: if n.coset.is_some() {
                        NodeKind::Labeled
                    } else {
                        NodeKind::PathPoint
                    },
                    label: n.coset.map(|c| model.render_word(&self.cosets[c].rep)),
                    depth: n.key.1,
                })
                .collect(),
            edges: self.edges.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VertexView {
    pub id: usize,
    pub kind: NodeKind,
    pub label: Option<String>,
    pub depth: i128,
}

#[derive(Debug, Clone, Serialize)]
pub struct TreeView {
    pub level: usize,
    pub radius: u32,
    pub vertex_count: usize,
    pub labeled_count: usize,
    pub path_point_count: usize,
    pub edge_count: usize,
    pub base: usize,
    pub vertices: Vec<VertexView>,
    pub edges: Vec<(usize, usize)>,
}

/// A tree inversion can only come from a power-height violation; this finds
/// the accompanying witness so an inversion report can carry it.
pub fn power_height_witness(lf: &LengthFunction, g: &Word, max_exp: i64) -> Result<Option<String>> {
    let lg = lf.evaluate(g)?;
    for e in (2..=max_exp).chain((2..=max_exp).map(|e| -e)) {
        let ge = lf.model().power(g, e)?;
        let le = lf.evaluate(&ge)?;
        if le < lg {
            let drop = &lg - &le;
            if drop.height().0 != 1 {
                return Ok(Some(format!(
                    "power-height violation: l({}^{e}) = {le} < l = {lg}, drop height {}",
                    lf.model().render_word(g),
                    drop.height()
                )));
            }
        }
    }
    Ok(None)
}

/// Distances from each of `{g, h, f}` to the center of their tripod in the
/// level-`k` calculus: the standard tripod center, stated explicitly since
/// the source convention is implicit. Pairwise sums reconstruct the level
/// pseudometric.
pub fn median(lf: &LengthFunction, g: &Word, h: &Word, f: &Word, k: usize) -> Result<[HalfVec; 3]> {
    let d =
        |x: &Word, y: &Word| -> Result<crate::lexvec::LexVec> { lf.pseudometric(x, y)?.project(k) };
    let dgh = d(g, h)?;
    let dgf = d(g, f)?;
    let dhf = d(h, f)?;
    let m_g = HalfVec::half_of(&(&dgh + &dgf) - &dhf);
    let m_h = HalfVec::half_of(&(&dgh + &dhf) - &dgf);
    let m_f = HalfVec::half_of(&(&dgf + &dhf) - &dgh);
    Ok([m_g, m_h, m_f])
}
