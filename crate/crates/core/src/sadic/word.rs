//! Lazily materialised words.
//!
//! A word is a tree of letters, concatenations and powers with exact
//! lengths. Subtrees are shared through `Arc`, and the longest-common-prefix
//! routine skips any pair of pointer-identical subtrees without descending.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Debug)]
enum Kind {
    Letter(u32),
    Concat(Vec<Word>),
    Power(Word, BigUint),
}

#[derive(Debug)]
struct Node {
    len: BigUint,
    kind: Kind,
}

/// An immutable, cheaply clonable word over `{1, …, d}`.
#[derive(Clone)]
pub struct Word(Arc<Node>);

impl Word {
    pub fn letter(a: u32) -> Word {
        Word(Arc::new(Node { len: BigUint::one(), kind: Kind::Letter(a) }))
    }

    pub fn empty() -> Word {
        Word(Arc::new(Node { len: BigUint::zero(), kind: Kind::Concat(Vec::new()) }))
    }

    /// Concatenation; empty parts are dropped and a single part is returned
    /// as is, so sharing is preserved.
    pub fn concat(parts: Vec<Word>) -> Word {
        let mut parts: Vec<Word> = parts.into_iter().filter(|w| !w.is_empty()).collect();
        match parts.len() {
            0 => Word::empty(),
            1 => parts.pop().unwrap(),
            _ => {
                let len = parts.iter().map(|w| &w.0.len).sum();
                Word(Arc::new(Node { len, kind: Kind::Concat(parts) }))
            }
        }
    }

    pub fn power(base: &Word, count: BigUint) -> Word {
        if count.is_zero() || base.is_empty() {
            return Word::empty();
        }
        if count.is_one() {
            return base.clone();
        }
        let len = &base.0.len * &count;
        Word(Arc::new(Node { len, kind: Kind::Power(base.clone(), count) }))
    }

    pub fn from_letters(letters: &[u32]) -> Word {
        Word::concat(letters.iter().map(|&a| Word::letter(a)).collect())
    }

    pub fn len(&self) -> &BigUint {
        &self.0.len
    }

    pub fn is_empty(&self) -> bool {
        self.0.len.is_zero()
    }

    pub fn ptr_eq(&self, other: &Word) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// The letters, if the word has at most `cutoff` of them.
    pub fn materialize(&self, cutoff: usize) -> Option<Vec<u32>> {
        let n = self.0.len.to_usize().filter(|&n| n <= cutoff)?;
        let mut out = Vec::with_capacity(n);
        self.push_letters(&mut out);
        Some(out)
    }

    fn push_letters(&self, out: &mut Vec<u32>) {
        match &self.0.kind {
            Kind::Letter(a) => out.push(*a),
            Kind::Concat(parts) => parts.iter().for_each(|p| p.push_letters(out)),
            Kind::Power(base, c) => {
                let c = c.to_usize().expect("bounded by materialize");
                for _ in 0..c {
                    base.push_letters(out);
                }
            }
        }
    }

    /// Letter at 0-based position `i`.
    pub fn letter_at(&self, i: &BigUint) -> Result<u32> {
        if i >= &self.0.len {
            return Err(Error::InvalidParameters(format!("index {i} beyond length {}", self.0.len)));
        }
        let mut node = self.clone();
        let mut i = i.clone();
        loop {
            let next = match &node.0.kind {
                Kind::Letter(a) => return Ok(*a),
                Kind::Concat(parts) => {
                    let mut chosen = None;
                    for p in parts {
                        if &i < p.len() {
                            chosen = Some(p.clone());
                            break;
                        }
                        i -= p.len();
                    }
                    chosen.expect("index within length")
                }
                Kind::Power(base, _) => {
                    i %= base.len();
                    base.clone()
                }
            };
            node = next;
        }
    }

    /// Count of each letter `1..=d`.
    pub fn abelianization(&self, d: usize) -> Vec<BigUint> {
        let mut out = vec![BigUint::zero(); d];
        self.add_counts(&BigUint::one(), &mut out);
        out
    }

    fn add_counts(&self, mult: &BigUint, out: &mut [BigUint]) {
        match &self.0.kind {
            Kind::Letter(a) => out[*a as usize - 1] += mult,
            Kind::Concat(parts) => parts.iter().for_each(|p| p.add_counts(mult, out)),
            Kind::Power(base, c) => base.add_counts(&(mult * c), out),
        }
    }
}

/// One level of a word's tree.
pub(crate) enum View<'a> {
    Letter(u32),
    Concat(&'a [Word]),
    Power(&'a Word, &'a BigUint),
}

impl Word {
    pub(crate) fn view(&self) -> View<'_> {
        match &self.0.kind {
            Kind::Letter(a) => View::Letter(*a),
            Kind::Concat(p) => View::Concat(p),
            Kind::Power(b, c) => View::Power(b, c),
        }
    }

    pub(crate) fn addr(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    /// Fails unless every letter lies in `1..=d`.
    pub fn check_letters(&self, d: usize) -> Result<()> {
        match &self.0.kind {
            Kind::Letter(a) if (1..=d as u32).contains(a) => Ok(()),
            Kind::Letter(a) => Err(Error::InvalidParameters(format!("letter {a} outside 1..={d}"))),
            Kind::Concat(parts) => parts.iter().try_for_each(|p| p.check_letters(d)),
            Kind::Power(base, _) => base.check_letters(d),
        }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.materialize(64) {
            Some(v) => {
                let s: Vec<String> = v.iter().map(|a| a.to_string()).collect();
                write!(f, "Word({})", s.join(""))
            }
            None => write!(f, "Word(len {})", self.0.len),
        }
    }
}

impl PartialEq for Word {
    /// Content equality, decided through the common prefix.
    fn eq(&self, other: &Word) -> bool {
        self.0.len == other.0.len
            && lcp(self, other, usize::MAX).map(|l| l == self.0.len).unwrap_or(false)
    }
}

enum Item {
    Node(Word),
    Rep(Word, BigUint),
}

impl Item {
    fn len(&self) -> BigUint {
        match self {
            Item::Node(w) => w.len().clone(),
            Item::Rep(w, c) => w.len() * c,
        }
    }
}

fn expand(stack: &mut Vec<Item>, item: Item) {
    match item {
        Item::Rep(base, c) => {
            if c > BigUint::one() {
                stack.push(Item::Rep(base.clone(), c - 1u32));
            }
            stack.push(Item::Node(base));
        }
        Item::Node(w) => match &w.0.kind {
            Kind::Letter(_) => stack.push(Item::Node(w.clone())),
            Kind::Concat(parts) => {
                for p in parts.iter().rev() {
                    stack.push(Item::Node(p.clone()));
                }
            }
            Kind::Power(base, c) => stack.push(Item::Rep(base.clone(), c.clone())),
        },
    }
}

fn is_letter(item: &Item) -> Option<u32> {
    match item {
        Item::Node(w) => match w.0.kind {
            Kind::Letter(a) => Some(a),
            _ => None,
        },
        Item::Rep(..) => None,
    }
}

/// Length of the longest common prefix. Fails if more than `budget`
/// expansion steps are needed (only possible for words built without
/// shared structure).
pub fn lcp(a: &Word, b: &Word, budget: usize) -> Result<BigUint> {
    let mut sa = vec![Item::Node(a.clone())];
    let mut sb = vec![Item::Node(b.clone())];
    let mut acc = BigUint::zero();
    let mut steps = 0usize;
    while let (Some(x), Some(y)) = (sa.pop(), sb.pop()) {
        steps += 1;
        if steps > budget {
            return Err(Error::InsufficientPrecision(format!("common prefix search exceeded {budget} steps")));
        }
        match (&x, &y) {
            (Item::Node(p), Item::Node(q)) if p.ptr_eq(q) => {
                acc += p.len();
                continue;
            }
            (Item::Rep(p, c), Item::Rep(q, e)) if p.ptr_eq(q) => {
                let m = c.min(e).clone();
                acc += p.len() * &m;
                if c > &m {
                    sa.push(Item::Rep(p.clone(), c - &m));
                }
                if e > &m {
                    sb.push(Item::Rep(q.clone(), e - &m));
                }
                continue;
            }
            _ => {}
        }
        match (is_letter(&x), is_letter(&y)) {
            (Some(p), Some(q)) => {
                if p != q {
                    break;
                }
                acc += 1u32;
            }
            (Some(_), None) => {
                sa.push(x);
                expand(&mut sb, y);
            }
            (None, Some(_)) => {
                expand(&mut sa, x);
                sb.push(y);
            }
            (None, None) => {
                // unfold the longer side, or a repetition first so that a
                // shared base can meet its twin
                let unfold_x = match (&x, &y) {
                    (Item::Rep(..), Item::Node(_)) => true,
                    (Item::Node(_), Item::Rep(..)) => false,
                    _ => x.len() >= y.len(),
                };
                if unfold_x {
                    expand(&mut sa, x);
                    sb.push(y);
                } else {
                    sa.push(x);
                    expand(&mut sb, y);
                }
            }
        }
    }
    Ok(acc)
}
