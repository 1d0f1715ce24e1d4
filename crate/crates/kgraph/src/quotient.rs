//! The quotient layer: adjacent-transposition chains on colour words, explicit
//! flip-chain witnesses between equivalent paths, structure checks for the
//! quotient category E*/~, and finite-depth cylinder checks for the
//! infinite-path quotient map.

use std::collections::{BTreeMap, BTreeSet};

use crate::category::KGraph;
use crate::cube::CubeMorphism;
use crate::degree::{abelianize, Colour, ColourWord, Degree};
use crate::error::{Error, Result};
use crate::graph::ColouredPath;
use crate::squares::SquareCollection;

/// Chain of colour words from w to w2 where consecutive words differ by one
/// adjacent transposition; singleton when the words are equal. Errors unless
/// the words have equal abelianization.
pub fn shuffle_chain(w: &ColourWord, w2: &ColourWord) -> Result<Vec<ColourWord>> {
    Ok(shuffle_chain_with_swaps(w, w2)?.0)
}

/// As `shuffle_chain`, also returning for each step the index of the left
/// element of the transposed pair.
pub fn shuffle_chain_with_swaps(
    w: &ColourWord,
    w2: &ColourWord,
) -> Result<(Vec<ColourWord>, Vec<usize>)> {
    let k = w
        .letters()
        .iter()
        .chain(w2.letters())
        .map(|c| c.index() + 1)
        .max()
        .unwrap_or(1);
    let (qa, qb) = (abelianize(w, k)?, abelianize(w2, k)?);
    if qa != qb {
        return Err(Error::UnequalAbelianization {
            left: qa.to_string(),
            right: qb.to_string(),
        });
    }
    let mut chain = vec![w.clone()];
    let mut swaps = Vec::new();
    let mut prefix: Vec<Colour> = Vec::new();
    let mut current: Vec<Colour> = w.letters().to_vec();
    let target: Vec<Colour> = w2.letters().to_vec();

    for &next in &target {
        // bubble the first occurrence of the target letter to the front;
        // minimality means each swap transposes distinct colours
        let j = current
            .iter()
            .position(|&c| c == next)
            .expect("equal abelianizations guarantee the letter is present");
        for pos in (0..j).rev() {
            current.swap(pos, pos + 1);
            swaps.push(prefix.len() + pos);
            let mut word = prefix.clone();
            word.extend_from_slice(&current);
            chain.push(ColourWord::new(word));
        }
        prefix.push(current.remove(0));
    }
    Ok((chain, swaps))
}

/// An explicit witness that two coloured paths are equivalent: a sequence of
/// paths where consecutive entries differ at positions (j, j+1) by one square
/// flip.
#[derive(Clone, Debug)]
pub struct SwapChain<'g> {
    paths: Vec<ColouredPath<'g>>,
    swaps: Vec<usize>,
}

impl<'g> SwapChain<'g> {
    pub fn paths(&self) -> &[ColouredPath<'g>] {
        &self.paths
    }

    pub fn swaps(&self) -> &[usize] {
        &self.swaps
    }

    /// Number of flip steps.
    pub fn steps(&self) -> usize {
        self.swaps.len()
    }

    pub fn start(&self) -> &ColouredPath<'g> {
        self.paths.first().expect("chain is never empty")
    }

    pub fn end(&self) -> &ColouredPath<'g> {
        self.paths.last().expect("chain is never empty")
    }

    /// Replays every recorded flip and checks each intermediate path.
    pub fn verify(&self, collection: &SquareCollection<'g>) -> bool {
        if self.paths.len() != self.swaps.len() + 1 {
            return false;
        }
        for (step, &j) in self.swaps.iter().enumerate() {
            let here = &self.paths[step];
            let there = &self.paths[step + 1];
            if here.len() != there.len() || j + 1 >= here.len() {
                return false;
            }
            let flipped = match collection.flip_pair(here.edge(j), here.edge(j + 1)) {
                Ok(pair) => pair,
                Err(_) => return false,
            };
            if (there.edge(j), there.edge(j + 1)) != flipped {
                return false;
            }
            let untouched = (0..here.len())
                .filter(|&l| l != j && l != j + 1)
                .all(|l| here.edge(l) == there.edge(l));
            if !untouched {
                return false;
            }
        }
        true
    }
}

impl<'g> KGraph<'g> {
    /// x ~ y iff they normalize to the same C-compatible morphism.
    pub fn equivalent(&self, x: &ColouredPath<'g>, y: &ColouredPath<'g>) -> Result<bool> {
        if x.shape() != y.shape() || x.range() != y.range() {
            return Ok(false);
        }
        Ok(self.collection().normalize(x)? == self.collection().normalize(y)?)
    }

    /// Builds the explicit flip chain from x to y by lifting a shuffle chain
    /// on the colour words through the common cube.
    pub fn witness_chain(&self, x: &ColouredPath<'g>, y: &ColouredPath<'g>) -> Result<SwapChain<'g>> {
        let lambda = self.collection().normalize(x)?;
        if lambda != self.collection().normalize(y)? {
            return Err(Error::NotEquivalent);
        }
        let (words, swaps) = shuffle_chain_with_swaps(&x.colour_word(), &y.colour_word())?;
        let paths = words
            .iter()
            .map(|w| {
                lambda
                    .traversal_along(w)
                    .expect("chain words share the cube's shape")
            })
            .collect::<Vec<_>>();
        debug_assert_eq!(paths.first(), Some(x));
        debug_assert_eq!(paths.last(), Some(y));
        Ok(SwapChain { paths, swaps })
    }

    /// All composable paths of length <= bound, from every vertex (length-0
    /// paths included).
    pub fn all_paths_up_to(&self, bound: usize) -> Vec<ColouredPath<'g>> {
        let g = self.graph();
        let mut out: Vec<ColouredPath<'g>> = Vec::new();
        let mut frontier: Vec<ColouredPath<'g>> = g
            .vertices()
            .map(|v| ColouredPath::empty(g, v))
            .collect();
        out.extend(frontier.iter().cloned());
        for _ in 0..bound {
            let mut next = Vec::new();
            for path in &frontier {
                for e in g.in_edges_all_colours(path.source()) {
                    let extended = path.extended(e).expect("in-edge is composable");
                    next.push(extended);
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }

    /// Checks that E*/~ carries the quotient k-graph structure: r, s, d are
    /// constant on classes, composition is representative-independent, and
    /// class counts per (vertex, degree) agree with the morphism counts.
    pub fn quotient_structure_check(
        &self,
        length_bound: usize,
        product_budget: usize,
    ) -> Result<QuotientReport> {
        let mut report = QuotientReport::default();
        let paths = self.all_paths_up_to(length_bound);
        report.paths = paths.len();

        let mut classes: BTreeMap<CubeMorphism<'g>, Vec<ColouredPath<'g>>> = BTreeMap::new();
        for path in paths {
            let cube = self.collection().normalize(&path)?;
            classes.entry(cube).or_default().push(path);
        }
        report.classes = classes.len();

        for (cube, members) in &classes {
            for member in members {
                if member.range() != cube.range()
                    || member.source() != cube.source()
                    || member.shape() != *cube.degree()
                {
                    report.violation = Some(format!(
                        "class of a degree-{} morphism has a member with different r, s, or d",
                        cube.degree()
                    ));
                    return Ok(report);
                }
            }
        }

        // composition descends to classes: [x][y] = [xy] independent of the
        // chosen representatives
        let class_list: Vec<(&CubeMorphism<'g>, &Vec<ColouredPath<'g>>)> =
            classes.iter().collect();
        'outer: for (c1, members1) in &class_list {
            for (c2, members2) in &class_list {
                if c1.source() != c2.range()
                    || (c1.degree().total() + c2.degree().total()) as usize > length_bound
                {
                    continue;
                }
                let expected = self.collection().compose(c1, c2)?;
                for x in members1.iter() {
                    for y in members2.iter() {
                        let xy = x.concat(y)?;
                        if self.collection().normalize(&xy)? != expected {
                            report.violation = Some(format!(
                                "[x][y] != [xy] for classes of degrees {} and {}",
                                c1.degree(),
                                c2.degree()
                            ));
                            return Ok(report);
                        }
                        report.composition_checks += 1;
                        if report.composition_checks >= product_budget {
                            break 'outer;
                        }
                    }
                }
            }
        }

        // class counts per (v, m) match |v Lambda^m|
        let mut counts: BTreeMap<(crate::graph::VertexIx, Degree), usize> = BTreeMap::new();
        for cube in classes.keys() {
            *counts
                .entry((cube.range(), cube.degree().clone()))
                .or_default() += 1;
        }
        let top = Degree::from_coords(vec![length_bound as u32; self.k()]);
        for m in crate::degree::box_points(&Degree::zero(self.k()), &top) {
            if m.total() as usize > length_bound {
                continue;
            }
            for v in self.graph().vertices() {
                let expected = self.paths_of_degree(Some(v), &m)?.len();
                let got = counts.get(&(v, m.clone())).copied().unwrap_or(0);
                if expected != got {
                    report.class_counts_match = false;
                    report.violation = Some(format!(
                        "class count at ({}, {m}) is {got}, morphism count is {expected}",
                        self.graph().vertex_id(v)
                    ));
                    return Ok(report);
                }
            }
        }
        report.class_counts_match = true;
        Ok(report)
    }

    /// The coherent family of cubes lambda_{x_1...x_i} for every prefix of x,
    /// including the empty prefix. Entry i+1 restricts to entry i.
    pub fn extend_pi(&self, x: &ColouredPath<'g>) -> Result<Vec<CubeMorphism<'g>>> {
        let mut cube = CubeMorphism::identity_at(self.graph(), x.range());
        let mut family = vec![cube.clone()];
        for &e in x.edges() {
            cube = self.collection().extend(&cube, e)?;
            family.push(cube.clone());
        }
        Ok(family)
    }

    /// Finite-depth checks of the cylinder correspondence under the quotient
    /// map: (a) once a word prefix lands in the cube cylinder Z(mu), every
    /// extension up to the depth stays in it; (b) every cube extending mu by
    /// at most `depth` edges is hit by an explicit traversal word.
    pub fn cylinder_preimage_check(
        &self,
        mu: &CubeMorphism<'g>,
        depth: usize,
    ) -> Result<CylinderReport> {
        self.require_row_finite_no_sources()?;
        let g = self.graph();
        let zero = Degree::zero(self.k());
        let mut report = CylinderReport::default();

        let entered = |cube: &CubeMorphism<'g>| -> Result<bool> {
            Ok(mu.degree().le(cube.degree()) && &cube.restrict(&zero, mu.degree())? == mu)
        };

        // (a) prefix stability along every word of length <= depth from r(mu)
        let mut stack = vec![(CubeMorphism::identity_at(g, mu.range()), false, 0usize)];
        while let Some((cube, was_in, len)) = stack.pop() {
            let now_in = entered(&cube)?;
            if was_in && !now_in {
                report.violation = Some(format!(
                    "a word left the cylinder of the degree-{} cube at length {len}",
                    mu.degree()
                ));
                return Ok(report);
            }
            report.words_checked += 1;
            if len < depth {
                for e in g.in_edges_all_colours(cube.source()) {
                    stack.push((self.collection().extend(&cube, e)?, now_in, len + 1));
                }
            }
        }

        // (b) each extension class is hit by a word cylinder
        let mut level: BTreeSet<CubeMorphism<'g>> = std::iter::once(mu.clone()).collect();
        let mut seen: BTreeSet<CubeMorphism<'g>> = level.clone();
        for _ in 0..depth {
            let mut next = BTreeSet::new();
            for cube in &level {
                for e in g.in_edges_all_colours(cube.source()) {
                    let bigger = self.collection().extend(cube, e)?;
                    if seen.insert(bigger.clone()) {
                        next.insert(bigger);
                    }
                }
            }
            level = next;
        }
        for cube in &seen {
            let word = cube.canonical_traversal();
            if &self.collection().normalize(&word)? != cube {
                report.violation = Some(format!(
                    "no word cylinder hits an extension class of degree {}",
                    cube.degree()
                ));
                return Ok(report);
            }
        }
        report.extension_classes = seen.len();
        Ok(report)
    }
}

#[derive(Clone, Debug, Default)]
pub struct QuotientReport {
    pub paths: usize,
    pub classes: usize,
    pub composition_checks: usize,
    pub class_counts_match: bool,
    pub violation: Option<String>,
}

impl QuotientReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

#[derive(Clone, Debug, Default)]
pub struct CylinderReport {
    pub words_checked: usize,
    pub extension_classes: usize,
    pub violation: Option<String>,
}

impl CylinderReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// A finite prefix of an intended infinite path, together with its per-colour
/// letter counts. Construction checks the prefix is extendable in every
/// colour, the finite-truncation form of membership in the k-infinite path
/// space.
#[derive(Clone, Debug)]
pub struct PathPrefixFamily<'g> {
    path: ColouredPath<'g>,
    colour_counts: Degree,
}

impl<'g> PathPrefixFamily<'g> {
    pub fn new(path: ColouredPath<'g>) -> Result<Self> {
        let g = path.graph();
        let tip = path.source();
        for c in 0..g.k() {
            if g.in_edges(tip, Colour::new(c)).is_empty() {
                return Err(Error::Precondition(format!(
                    "prefix is not extendable in colour c{} at vertex {:?}",
                    c + 1,
                    g.vertex_id(tip)
                )));
            }
        }
        let colour_counts = path.shape();
        Ok(PathPrefixFamily {
            path,
            colour_counts,
        })
    }

    pub fn path(&self) -> &ColouredPath<'g> {
        &self.path
    }

    pub fn colour_counts(&self) -> &Degree {
        &self.colour_counts
    }
}
