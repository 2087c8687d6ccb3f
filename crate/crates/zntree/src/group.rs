//! Concrete finitely generated group models with canonical normal forms,
//! exact multiplication, and word-ball enumeration.
//!
//! Three kinds are built in: free groups (free reduction), free abelian
//! groups (sorted exponent vectors), and finite table groups (a full
//! multiplication table over a declared universe, with canonical words
//! assigned by breadth-first search from the generators). Every check in the
//! rest of the crate runs over balls enumerated here, so enumeration order is
//! pinned to shortlex by (length, generator index, sign).

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};

pub const DEFAULT_BALL_CAP: usize = 200_000;

/// Sign of a letter; positive sorts before negative so that shortlex order
/// is `1 < a < a^-1 < b < ...`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub gen: usize,
    pub sign: Sign,
}

impl Letter {
    pub fn inverse(self) -> Letter {
        Letter {
            gen: self.gen,
            sign: self.sign.flip(),
        }
    }
}

/// A word in the generators of some model. A *canonical* word is the unique
/// normal form of its group element under the owning model; operations that
/// promise canonical output document it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Word {
        Word {
            letters: Vec::new(),
        }
    }

    pub fn from_letters(letters: Vec<Letter>) -> Word {
        Word { letters }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    /// Shortlex: by length first, then letterwise by (generator index, sign).
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.letters
            .len()
            .cmp(&other.letters.len())
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
}

/// Finite group given by a full multiplication table on a declared universe.
/// Partial tables are rejected at load time.
#[derive(Debug, Clone)]
pub struct TableModel {
    pub elements: Vec<String>,
    pub identity: usize,
    /// element index realizing each generator
    pub gen_elem: Vec<usize>,
    pub mult: Vec<Vec<usize>>,
    pub inv: Vec<usize>,
    /// shortlex-least generator word per element
    pub canonical: Vec<Word>,
    by_word: HashMap<Word, usize>,
}

impl TableModel {
    pub fn size(&self) -> usize {
        self.elements.len()
    }

    fn element_of(&self, w: &Word) -> usize {
        let mut idx = self.identity;
        for l in w.letters() {
            let mut e = self.gen_elem[l.gen];
            if l.sign == Sign::Neg {
                e = self.inv[e];
            }
            idx = self.mult[idx][e];
        }
        idx
    }

    pub fn index_of_canonical(&self, w: &Word) -> Option<usize> {
        self.by_word.get(w).copied()
    }
}

#[derive(Debug, Clone)]
pub enum ModelKind {
    Free,
    FreeAbelian,
    Table(TableModel),
}

/// A finitely generated group with a decidable word problem: canonical
/// normal forms, exact multiplication and inversion, and finite ball
/// enumeration. Immutable after construction; all operations are pure.
#[derive(Debug, Clone)]
pub struct GroupModel {
    pub generators: Vec<Generator>,
    pub kind: ModelKind,
    pub torsion_free: bool,
    pub ball_cap: usize,
}

impl GroupModel {
    pub fn free(names: &[&str]) -> Result<GroupModel> {
        GroupModel::new_free(names.iter().map(|s| s.to_string()).collect())
    }

    pub fn new_free(names: Vec<String>) -> Result<GroupModel> {
        Ok(GroupModel {
            generators: validated_generators(names)?,
            kind: ModelKind::Free,
            torsion_free: true,
            ball_cap: DEFAULT_BALL_CAP,
        })
    }

    pub fn free_abelian(names: &[&str]) -> Result<GroupModel> {
        GroupModel::new_free_abelian(names.iter().map(|s| s.to_string()).collect())
    }

    pub fn new_free_abelian(names: Vec<String>) -> Result<GroupModel> {
        Ok(GroupModel {
            generators: validated_generators(names)?,
            kind: ModelKind::FreeAbelian,
            torsion_free: true,
            ball_cap: DEFAULT_BALL_CAP,
        })
    }

    /// Builds a table model and validates it fully: totality of the table,
    /// identity behavior, unique two-sided inverses, associativity, and
    /// reachability of every element from the generators.
    pub fn new_table(
        gen_names: Vec<String>,
        elements: Vec<String>,
        identity: &str,
        mult_by_name: &dyn Fn(&str, &str) -> Option<String>,
        torsion_free: bool,
    ) -> Result<GroupModel> {
        let generators = validated_generators(gen_names.clone())?;
        let m = elements.len();
        if m == 0 {
            return Err(Error::Document("table universe is empty".into()));
        }
        let mut index: HashMap<&str, usize> = HashMap::new();
        for (i, e) in elements.iter().enumerate() {
            if index.insert(e.as_str(), i).is_some() {
                return Err(Error::Document(format!("duplicate table element `{e}`")));
            }
        }
        let identity = *index
            .get(identity)
            .ok_or_else(|| Error::Document(format!("identity `{identity}` not in universe")))?;
        let gen_elem = gen_names
            .iter()
            .map(|g| {
                index
                    .get(g.as_str())
                    .copied()
                    .ok_or_else(|| Error::Document(format!("generator `{g}` not in universe")))
            })
            .collect::<Result<Vec<_>>>()?;

        let mut mult = vec![vec![0usize; m]; m];
        for (i, a) in elements.iter().enumerate() {
            for (j, b) in elements.iter().enumerate() {
                let prod = mult_by_name(a, b).ok_or_else(|| {
                    Error::Document(format!("multiplication table is partial at ({a}, {b})"))
                })?;
                mult[i][j] = *index.get(prod.as_str()).ok_or_else(|| {
                    Error::Document(format!("product `{prod}` of ({a}, {b}) not in universe"))
                })?;
            }
        }
        for i in 0..m {
            if mult[identity][i] != i || mult[i][identity] != i {
                return Err(Error::Document(format!(
                    "`{}` does not behave as an identity",
                    elements[identity]
                )));
            }
        }
        let mut inv = vec![usize::MAX; m];
        for i in 0..m {
            for j in 0..m {
                if mult[i][j] == identity {
                    if mult[j][i] != identity {
                        return Err(Error::Document(format!(
                            "`{}` has a one-sided inverse",
                            elements[i]
                        )));
                    }
                    inv[i] = j;
                }
            }
            if inv[i] == usize::MAX {
                return Err(Error::Document(format!("`{}` has no inverse", elements[i])));
            }
        }
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    if mult[mult[a][b]][c] != mult[a][mult[b][c]] {
                        return Err(Error::Document(format!(
                            "associativity fails at ({}, {}, {})",
                            elements[a], elements[b], elements[c]
                        )));
                    }
                }
            }
        }

        // Shortlex-least generator word per element, by BFS in letter order.
        let mut canonical: Vec<Option<Word>> = vec![None; m];
        canonical[identity] = Some(Word::identity());
        let mut frontier = vec![identity];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &e in &frontier {
                let base = canonical[e].clone().expect("frontier is assigned");
                for g in 0..gen_elem.len() {
                    for sign in [Sign::Pos, Sign::Neg] {
                        let step = if sign == Sign::Pos {
                            gen_elem[g]
                        } else {
                            inv[gen_elem[g]]
                        };
                        let target = mult[e][step];
                        if canonical[target].is_none() {
                            let mut letters = base.letters().to_vec();
                            letters.push(Letter { gen: g, sign });
                            canonical[target] = Some(Word::from_letters(letters));
                            next.push(target);
                        }
                    }
                }
            }
            // Within a BFS level, smaller parents must extend first so the
            // assigned word is the shortlex least.
            next.sort_by(|a, b| canonical[*a].cmp(&canonical[*b]));
            frontier = next;
        }
        let canonical = canonical
            .into_iter()
            .enumerate()
            .map(|(i, w)| {
                w.ok_or_else(|| {
                    Error::Document(format!(
                        "element `{}` is not generated by the declared generators",
                        elements[i]
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let by_word = canonical
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();

        Ok(GroupModel {
            generators,
            kind: ModelKind::Table(TableModel {
                elements,
                identity,
                gen_elem,
                mult,
                inv,
                canonical,
                by_word,
            }),
            torsion_free,
            ball_cap: DEFAULT_BALL_CAP,
        })
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn generator_index(&self, name: &str) -> Result<usize> {
        self.generators
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    fn check_letters(&self, w: &Word) -> Result<()> {
        for l in w.letters() {
            if l.gen >= self.rank() {
                return Err(Error::UnknownGenerator(format!("#{}", l.gen)));
            }
        }
        Ok(())
    }

    /// Canonical form: free reduction, sorted exponent vector, or table
    /// lookup. Idempotent.
    pub fn normalize(&self, w: &Word) -> Result<Word> {
        self.check_letters(w)?;
        Ok(match &self.kind {
            ModelKind::Free => {
                let mut out: Vec<Letter> = Vec::with_capacity(w.len());
                for &l in w.letters() {
                    if out.last() == Some(&l.inverse()) {
                        out.pop();
                    } else {
                        out.push(l);
                    }
                }
                Word::from_letters(out)
            }
            ModelKind::FreeAbelian => {
                let exps = self.exponents(w)?;
                self.word_from_exponents(&exps)
            }
            ModelKind::Table(t) => t.canonical[t.element_of(w)].clone(),
        })
    }

    /// Signed exponent sum per generator. For abelian models this is the
    /// complete invariant of the element.
    pub fn exponents(&self, w: &Word) -> Result<Vec<i128>> {
        self.check_letters(w)?;
        let mut exps = vec![0i128; self.rank()];
        for l in w.letters() {
            match l.sign {
                Sign::Pos => exps[l.gen] += 1,
                Sign::Neg => exps[l.gen] -= 1,
            }
        }
        Ok(exps)
    }

    pub fn word_from_exponents(&self, exps: &[i128]) -> Word {
        let mut letters = Vec::new();
        for (g, &e) in exps.iter().enumerate() {
            let sign = if e >= 0 { Sign::Pos } else { Sign::Neg };
            for _ in 0..e.unsigned_abs() {
                letters.push(Letter { gen: g, sign });
            }
        }
        Word::from_letters(letters)
    }

    pub fn multiply(&self, u: &Word, v: &Word) -> Result<Word> {
        match &self.kind {
            ModelKind::Table(t) => {
                self.check_letters(u)?;
                self.check_letters(v)?;
                let idx = t.mult[t.element_of(u)][t.element_of(v)];
                Ok(t.canonical[idx].clone())
            }
            _ => {
                let mut letters = u.letters().to_vec();
                letters.extend_from_slice(v.letters());
                self.normalize(&Word::from_letters(letters))
            }
        }
    }

    pub fn invert(&self, u: &Word) -> Result<Word> {
        self.check_letters(u)?;
        Ok(match &self.kind {
            ModelKind::Free => {
                Word::from_letters(u.letters().iter().rev().map(|l| l.inverse()).collect())
            }
            ModelKind::FreeAbelian => {
                let exps: Vec<i128> = self.exponents(u)?.iter().map(|e| -e).collect();
                self.word_from_exponents(&exps)
            }
            ModelKind::Table(t) => t.canonical[t.inv[t.element_of(u)]].clone(),
        })
    }

    pub fn power(&self, u: &Word, e: i64) -> Result<Word> {
        let base = if e < 0 {
            self.invert(u)?
        } else {
            self.normalize(u)?
        };
        let mut acc = Word::identity();
        for _ in 0..e.unsigned_abs() {
            acc = self.multiply(&acc, &base)?;
        }
        Ok(acc)
    }

    /// All distinct elements of word length at most `r`, in shortlex order.
    pub fn enumerate_ball(&self, r: u32) -> Result<Ball> {
        let mut seen: HashSet<Word> = HashSet::new();
        seen.insert(Word::identity());
        let mut frontier = vec![Word::identity()];
        for _ in 0..r {
            let mut next = Vec::new();
            for w in &frontier {
                for g in 0..self.rank() {
                    for sign in [Sign::Pos, Sign::Neg] {
                        let step = Word::from_letters(vec![Letter { gen: g, sign }]);
                        let prod = self.multiply(w, &step)?;
                        if seen.insert(prod.clone()) {
                            if seen.len() > self.ball_cap {
                                return Err(Error::BallCapExceeded {
                                    radius: r,
                                    cap: self.ball_cap,
                                });
                            }
                            next.push(prod);
                        }
                    }
                }
            }
            frontier = next;
        }
        let mut words: Vec<Word> = seen.into_iter().collect();
        words.sort();
        let index = words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        Ok(Ball {
            radius: r,
            words,
            index,
        })
    }

    pub fn render_word(&self, w: &Word) -> String {
        if w.is_identity() {
            return "1".to_string();
        }
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        let letters = w.letters();
        while i < letters.len() {
            let l = letters[i];
            let mut run = 1usize;
            while i + run < letters.len() && letters[i + run] == l {
                run += 1;
            }
            let name = &self.generators[l.gen].name;
            let part = match (l.sign, run) {
                (Sign::Pos, 1) => name.clone(),
                (Sign::Pos, k) => format!("{name}^{k}"),
                (Sign::Neg, k) => format!("{name}^-{k}"),
            };
            parts.push(part);
            i += run;
        }
        parts.join(" ")
    }

    /// Parses `name`, `name^k`, `name^-k` tokens separated by whitespace;
    /// `1` alone is the identity. The result is normalized.
    pub fn parse_word(&self, s: &str) -> Result<Word> {
        let t = s.trim();
        if t.is_empty() {
            return Err(Error::Parse("empty word".into()));
        }
        if t == "1" {
            return Ok(Word::identity());
        }
        let mut letters = Vec::new();
        for tok in t.split_whitespace() {
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => {
                    let exp: i64 = e
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent in `{tok}`")))?;
                    (n, exp)
                }
                None => (tok, 1),
            };
            let gen = self.generator_index(name)?;
            let sign = if exp >= 0 { Sign::Pos } else { Sign::Neg };
            for _ in 0..exp.unsigned_abs() {
                letters.push(Letter { gen, sign });
            }
        }
        self.normalize(&Word::from_letters(letters))
    }
}

fn validated_generators(names: Vec<String>) -> Result<Vec<Generator>> {
    if names.is_empty() {
        return Err(Error::Document(
            "a model needs at least one generator".into(),
        ));
    }
    let mut seen = HashSet::new();
    for n in &names {
        if n.is_empty() || n == "1" || !n.chars().all(|c| c.is_alphanumeric() || c == '_') {
            return Err(Error::Document(format!("invalid generator name `{n}`")));
        }
        if !seen.insert(n.clone()) {
            return Err(Error::Document(format!("duplicate generator name `{n}`")));
        }
    }
    Ok(names.into_iter().map(|name| Generator { name }).collect())
}

/// A frozen, shortlex-sorted enumeration of a word ball. Canonical forms are
/// stable across radii: B_r is a prefix of B_{r+1}.
#[derive(Debug, Clone)]
pub struct Ball {
    pub radius: u32,
    pub words: Vec<Word>,
    index: HashMap<Word, usize>,
}

impl Ball {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.index.contains_key(w)
    }

    pub fn position(&self, w: &Word) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Word> {
        self.words.iter()
    }
}

/// Greedy shortlex reduction of a window subset to elements that generate it
/// within the window: keep a word only if it is not a window-product of the
/// words already kept. The kept list is returned without inverses; callers
/// that want symmetric lists add them.
pub fn greedy_generators(model: &GroupModel, members: &[Word]) -> Result<Vec<Word>> {
    let member_set: HashSet<&Word> = members.iter().collect();
    let mut sorted: Vec<&Word> = members.iter().filter(|w| !w.is_identity()).collect();
    sorted.sort();
    let mut gens: Vec<Word> = Vec::new();
    let mut closure: HashSet<Word> = HashSet::new();
    closure.insert(Word::identity());
    for w in sorted {
        if closure.contains(w) {
            continue;
        }
        gens.push((*w).clone());
        // grow the closure by the new generator, staying inside the window
        loop {
            let mut added = false;
            let snapshot: Vec<Word> = closure.iter().cloned().collect();
            for x in &snapshot {
                for g in &gens {
                    for cand in [model.multiply(x, g)?, model.multiply(x, &model.invert(g)?)?] {
                        if member_set.contains(&cand) && !closure.contains(&cand) {
                            closure.insert(cand);
                            added = true;
                        }
                    }
                }
            }
            if !added {
                break;
            }
        }
    }
    Ok(gens)
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B_{} ({} elements)", self.radius, self.len())
    }
}
