//! Braid words and braid movies.
//!
//! A movie is a start word plus a sequence of elementary transformations:
//! Reidemeister moves (type I, which preserve the braid element) and single
//! letter births and deaths (type II, which change it). Every step carries an
//! explicit position in the word, so replaying a movie is deterministic and
//! each intermediate frame is a well formed word. The sign rule for type II
//! steps: a birth of a positive letter or a death of a negative letter is
//! positive; the other two cases are negative.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BraidError {
    #[error("need at least 2 strands, got {0}")]
    Strands(usize),
    #[error("letter {0} out of range for {1} strands")]
    Letter(i32, usize),
    #[error("bad syntax: {0}")]
    Syntax(String),
    #[error("step {index}: {reason}")]
    Step { index: usize, reason: String },
    #[error("boundary mismatch: {0}")]
    Boundary(String),
}

/// A word in the braid group generators: letter `+i` is the i-th positive
/// crossing, `-i` its inverse, with `1 <= i < strands`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<BraidWord, BraidError> {
        if strands < 2 {
            return Err(BraidError::Strands(strands));
        }
        for &l in &letters {
            let g = l.unsigned_abs() as usize;
            if g == 0 || g >= strands {
                return Err(BraidError::Letter(l, strands));
            }
        }
        Ok(BraidWord { strands, letters })
    }

    pub fn empty(strands: usize) -> BraidWord {
        BraidWord::new(strands, Vec::new()).unwrap()
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Exponent sum of the word.
    pub fn writhe(&self) -> i64 {
        self.letters.iter().map(|l| l.signum() as i64).sum()
    }

    /// Applies one movie step, or explains why it does not fit here.
    pub fn apply(&self, step: &MovieStep) -> Result<BraidWord, String> {
        let len = self.letters.len();
        let gen_ok = |g: usize| g >= 1 && g < self.strands;
        let mut letters = self.letters.clone();
        match *step {
            MovieStep::Birth { pos, gen, sign } => {
                if pos > len {
                    return Err(format!("birth position {pos} past end {len}"));
                }
                if !gen_ok(gen) {
                    return Err(format!("generator {gen} out of range"));
                }
                if sign != 1 && sign != -1 {
                    return Err(format!("sign must be +1 or -1, got {sign}"));
                }
                letters.insert(pos, sign as i32 * gen as i32);
            }
            MovieStep::Death { pos } => {
                if pos >= len {
                    return Err(format!("death position {pos} past end {len}"));
                }
                letters.remove(pos);
            }
            MovieStep::R1 { pos, mv: R1Move::Insert { gen, sign } } => {
                if pos > len {
                    return Err(format!("insert position {pos} past end {len}"));
                }
                if !gen_ok(gen) {
                    return Err(format!("generator {gen} out of range"));
                }
                if sign != 1 && sign != -1 {
                    return Err(format!("sign must be +1 or -1, got {sign}"));
                }
                let l = sign as i32 * gen as i32;
                letters.insert(pos, -l);
                letters.insert(pos, l);
            }
            MovieStep::R1 { pos, mv: R1Move::Delete } => {
                if pos + 2 > len {
                    return Err(format!("no letter pair at {pos}"));
                }
                if letters[pos] != -letters[pos + 1] {
                    return Err(format!(
                        "letters {} {} at {pos} do not cancel",
                        letters[pos],
                        letters[pos + 1]
                    ));
                }
                letters.drain(pos..pos + 2);
            }
            MovieStep::R2 { pos } => {
                if pos + 2 > len {
                    return Err(format!("no letter pair at {pos}"));
                }
                let (g1, g2) = (letters[pos].unsigned_abs(), letters[pos + 1].unsigned_abs());
                if g1.abs_diff(g2) < 2 {
                    return Err(format!(
                        "generators {g1} {g2} at {pos} are not distant"
                    ));
                }
                letters.swap(pos, pos + 1);
            }
            MovieStep::R3 { pos } => {
                if pos + 3 > len {
                    return Err(format!("no letter triple at {pos}"));
                }
                let (l1, l2, l3) = (letters[pos], letters[pos + 1], letters[pos + 2]);
                let (g, h) = (l1.unsigned_abs() as i32, l2.unsigned_abs() as i32);
                if l3.unsigned_abs() as i32 != g || g.abs_diff(h) != 1 {
                    return Err(format!(
                        "letters {l1} {l2} {l3} at {pos} do not interleave"
                    ));
                }
                let (a, b, c) = (l1.signum(), l2.signum(), l3.signum());
                // The substitution g^a h^b g^c -> h^c g^b h^a holds in the
                // braid group for every sign pattern except a = c, b = -a.
                if a == c && b != a {
                    return Err(format!(
                        "sign pattern ({a},{b},{c}) is not a braid relation"
                    ));
                }
                letters[pos] = c * h;
                letters[pos + 1] = b * g;
                letters[pos + 2] = a * h;
            }
        }
        Ok(BraidWord { strands: self.strands, letters })
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={};", self.strands)?;
        for l in &self.letters {
            write!(f, " {l}")?;
        }
        Ok(())
    }
}

impl FromStr for BraidWord {
    type Err = BraidError;

    /// Format: `n=<strands>;` then whitespace separated signed letters,
    /// for example `n=3; 1 2 -1`.
    fn from_str(s: &str) -> Result<BraidWord, BraidError> {
        let (head, tail) = s
            .split_once(';')
            .ok_or_else(|| BraidError::Syntax(format!("missing ';' in {s:?}")))?;
        let strands = head
            .trim()
            .strip_prefix("n=")
            .and_then(|v| v.trim().parse::<usize>().ok())
            .ok_or_else(|| BraidError::Syntax(format!("bad header {head:?}")))?;
        let mut letters = Vec::new();
        for tok in tail.split_whitespace() {
            let l = tok
                .parse::<i32>()
                .map_err(|_| BraidError::Syntax(format!("bad letter {tok:?}")))?;
            letters.push(l);
        }
        BraidWord::new(strands, letters)
    }
}

/// The two directions of a first Reidemeister move.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "dir", rename_all = "lowercase")]
pub enum R1Move {
    Insert { gen: usize, sign: i8 },
    Delete,
}

/// One frame transition of a movie. Positions index letters of the current
/// word; insertions may use the one-past-the-end position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum MovieStep {
    Birth {
        pos: usize,
        gen: usize,
        sign: i8,
    },
    Death {
        pos: usize,
    },
    R1 {
        pos: usize,
        #[serde(flatten)]
        mv: R1Move,
    },
    R2 {
        pos: usize,
    },
    R3 {
        pos: usize,
    },
}

impl MovieStep {
    fn offset(self, dpos: usize, dgen: usize) -> MovieStep {
        match self {
            MovieStep::Birth { pos, gen, sign } => MovieStep::Birth { pos: pos + dpos, gen: gen + dgen, sign },
            MovieStep::Death { pos } => MovieStep::Death { pos: pos + dpos },
            MovieStep::R1 { pos, mv: R1Move::Insert { gen, sign } } => MovieStep::R1 {
                pos: pos + dpos,
                mv: R1Move::Insert { gen: gen + dgen, sign },
            },
            MovieStep::R1 { pos, mv: R1Move::Delete } => MovieStep::R1 { pos: pos + dpos, mv: R1Move::Delete },
            MovieStep::R2 { pos } => MovieStep::R2 { pos: pos + dpos },
            MovieStep::R3 { pos } => MovieStep::R3 { pos: pos + dpos },
        }
    }
}

#[derive(Serialize, Deserialize)]
struct MovieRepr {
    n: usize,
    start: Vec<i32>,
    steps: Vec<MovieStep>,
}

/// A braid movie. The end word is always derived by replay, never stored.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MovieRepr", into = "MovieRepr")]
pub struct BraidMovie {
    pub start: BraidWord,
    pub steps: Vec<MovieStep>,
}

impl TryFrom<MovieRepr> for BraidMovie {
    type Error = BraidError;

    fn try_from(r: MovieRepr) -> Result<BraidMovie, BraidError> {
        Ok(BraidMovie { start: BraidWord::new(r.n, r.start)?, steps: r.steps })
    }
}

impl From<BraidMovie> for MovieRepr {
    fn from(m: BraidMovie) -> MovieRepr {
        MovieRepr { n: m.start.strands, start: m.start.letters, steps: m.steps }
    }
}

impl BraidMovie {
    pub fn identity(word: BraidWord) -> BraidMovie {
        BraidMovie { start: word, steps: Vec::new() }
    }

    pub fn strands(&self) -> usize {
        self.start.strands
    }

    /// All words the movie passes through, starting with `start`.
    pub fn frames(&self) -> Result<Vec<BraidWord>, BraidError> {
        let mut frames = vec![self.start.clone()];
        for (index, step) in self.steps.iter().enumerate() {
            let next = frames
                .last()
                .unwrap()
                .apply(step)
                .map_err(|reason| BraidError::Step { index, reason })?;
            frames.push(next);
        }
        Ok(frames)
    }

    pub fn end(&self) -> Result<BraidWord, BraidError> {
        Ok(self.frames()?.pop().unwrap())
    }

    pub fn validate(&self) -> Result<(), BraidError> {
        self.frames().map(|_| ())
    }

    /// Counts of positive and negative type II steps.
    pub fn polarity(&self) -> Result<(usize, usize), BraidError> {
        let frames = self.frames()?;
        let mut plus = 0;
        let mut minus = 0;
        for (step, frame) in self.steps.iter().zip(&frames) {
            match *step {
                MovieStep::Birth { sign, .. } => {
                    if sign > 0 {
                        plus += 1;
                    } else {
                        minus += 1;
                    }
                }
                MovieStep::Death { pos } => {
                    if frame.letters[pos] < 0 {
                        plus += 1;
                    } else {
                        minus += 1;
                    }
                }
                _ => {}
            }
        }
        Ok((plus, minus))
    }

    /// Parses and replay-validates a movie from its JSON form.
    pub fn from_json(text: &str) -> Result<BraidMovie, BraidError> {
        let movie: BraidMovie =
            serde_json::from_str(text).map_err(|e| BraidError::Syntax(e.to_string()))?;
        movie.validate()?;
        Ok(movie)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).unwrap()
    }
}

/// One catalog entry: two movies presenting the same cobordism, with the
/// expected sign where the catalog pins it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MoveFixture {
    pub name: String,
    pub movie1: BraidMovie,
    pub movie2: BraidMovie,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_sign: Option<i8>,
}

impl MoveFixture {
    /// Parses a fixture and replay-validates both movies.
    pub fn from_json(text: &str) -> Result<MoveFixture, BraidError> {
        let f: MoveFixture =
            serde_json::from_str(text).map_err(|e| BraidError::Syntax(e.to_string()))?;
        f.movie1.validate()?;
        f.movie2.validate()?;
        Ok(f)
    }
}

/// Concatenates two movies along their common boundary word.
pub fn compose_movies(m1: &BraidMovie, m2: &BraidMovie) -> Result<BraidMovie, BraidError> {
    let end = m1.end()?;
    if end != m2.start {
        return Err(BraidError::Boundary(format!(
            "end {end} of the first movie differs from start {} of the second",
            m2.start
        )));
    }
    let mut steps = m1.steps.clone();
    steps.extend_from_slice(&m2.steps);
    Ok(BraidMovie { start: m1.start.clone(), steps })
}

/// Runs two movies side by side on disjoint strands, the second shifted past
/// the strands of the first.
pub fn parallel_movies(m1: &BraidMovie, m2: &BraidMovie) -> Result<BraidMovie, BraidError> {
    let n1 = m1.start.strands;
    let shift_letter = |l: i32| l.signum() * (l.abs() + n1 as i32);
    let mut letters = m1.start.letters.clone();
    letters.extend(m2.start.letters.iter().map(|&l| shift_letter(l)));
    let start = BraidWord::new(n1 + m2.start.strands, letters)?;
    let mid = m1.end()?.len();
    let mut steps = m1.steps.clone();
    steps.extend(m2.steps.iter().map(|s| s.offset(mid, n1)));
    Ok(BraidMovie { start, steps })
}

/// Uniform random word, for relation fuzzing.
pub fn random_word<R: Rng>(strands: usize, len: usize, rng: &mut R) -> BraidWord {
    let letters = (0..len)
        .map(|_| {
            let g = rng.gen_range(1..strands) as i32;
            if rng.gen::<bool>() {
                g
            } else {
                -g
            }
        })
        .collect();
    BraidWord::new(strands, letters).unwrap()
}

fn step_candidates(word: &BraidWord, max_len: usize, positive_only: bool) -> Vec<MovieStep> {
    let len = word.len();
    let letters = word.letters();
    let mut out = Vec::new();
    if len < max_len {
        for pos in 0..=len {
            for gen in 1..word.strands() {
                out.push(MovieStep::Birth { pos, gen, sign: 1 });
                if !positive_only {
                    out.push(MovieStep::Birth { pos, gen, sign: -1 });
                }
            }
        }
    }
    if len + 2 <= max_len {
        for pos in 0..=len {
            for gen in 1..word.strands() {
                for sign in [1, -1] {
                    out.push(MovieStep::R1 { pos, mv: R1Move::Insert { gen, sign } });
                }
            }
        }
    }
    for pos in 0..len {
        if !positive_only || letters[pos] < 0 {
            out.push(MovieStep::Death { pos });
        }
    }
    for pos in 0..len.saturating_sub(1) {
        if letters[pos] == -letters[pos + 1] {
            out.push(MovieStep::R1 { pos, mv: R1Move::Delete });
        }
        if letters[pos].unsigned_abs().abs_diff(letters[pos + 1].unsigned_abs()) >= 2 {
            out.push(MovieStep::R2 { pos });
        }
    }
    for pos in 0..len.saturating_sub(2) {
        let (a, b, c) = (letters[pos].signum(), letters[pos + 1].signum(), letters[pos + 2].signum());
        if letters[pos].abs() == letters[pos + 2].abs()
            && letters[pos].unsigned_abs().abs_diff(letters[pos + 1].unsigned_abs()) == 1
            && !(a == c && b != a)
        {
            out.push(MovieStep::R3 { pos });
        }
    }
    out
}

/// Random valid movie from `start`, words capped at `max_len` letters. With
/// `positive_only` every type II step is positive, so the negative polarity
/// count stays zero.
pub fn random_movie<R: Rng>(
    start: &BraidWord,
    nsteps: usize,
    max_len: usize,
    positive_only: bool,
    rng: &mut R,
) -> BraidMovie {
    let mut word = start.clone();
    let mut steps = Vec::new();
    for _ in 0..nsteps {
        let candidates = step_candidates(&word, max_len, positive_only);
        if candidates.is_empty() {
            break;
        }
        let step = candidates[rng.gen_range(0..candidates.len())];
        word = word.apply(&step).unwrap();
        steps.push(step);
    }
    BraidMovie { start: start.clone(), steps }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn word(s: &str) -> BraidWord {
        s.parse().unwrap()
    }

    #[test]
    fn words_round_trip_through_the_text_format() {
        let w = word("n=3; 1 2 -1");
        assert_eq!(w.strands(), 3);
        assert_eq!(w.letters(), &[1, 2, -1]);
        assert_eq!(w.to_string(), "n=3; 1 2 -1");
        assert_eq!(word(&w.to_string()), w);
        assert_eq!(word("n=4;"), BraidWord::empty(4));
        assert_eq!(BraidWord::empty(4).to_string(), "n=4;");
    }

    #[test]
    fn malformed_words_are_rejected() {
        assert!(matches!("n=3; 3".parse::<BraidWord>(), Err(BraidError::Letter(3, 3))));
        assert!(matches!("n=3; 0".parse::<BraidWord>(), Err(BraidError::Letter(0, 3))));
        assert!(matches!("n=1; 1".parse::<BraidWord>(), Err(BraidError::Strands(1))));
        assert!(matches!("m=3; 1".parse::<BraidWord>(), Err(BraidError::Syntax(_))));
        assert!(matches!("n=3".parse::<BraidWord>(), Err(BraidError::Syntax(_))));
        assert!(matches!("n=3; x".parse::<BraidWord>(), Err(BraidError::Syntax(_))));
    }

    #[test]
    fn birth_from_the_empty_word_yields_a_single_letter() {
        let text = r#"{"n":2,"start":[],"steps":[{"op":"birth","pos":0,"gen":1,"sign":1}]}"#;
        let movie = BraidMovie::from_json(text).unwrap();
        assert_eq!(movie.end().unwrap(), word("n=2; 1"));
        let back = BraidMovie::from_json(&movie.to_json()).unwrap();
        assert_eq!(back, movie);
    }

    fn six_step_movie() -> BraidMovie {
        BraidMovie {
            start: word("n=4; 1 2 1"),
            steps: vec![
                MovieStep::R3 { pos: 0 },
                MovieStep::Birth { pos: 2, gen: 3, sign: -1 },
                MovieStep::R2 { pos: 1 },
                MovieStep::R1 { pos: 2, mv: R1Move::Insert { gen: 1, sign: 1 } },
                MovieStep::R1 { pos: 2, mv: R1Move::Delete },
                MovieStep::Death { pos: 1 },
            ],
        }
    }

    #[test]
    fn the_step_encoding_is_stable() {
        let movie = six_step_movie();
        let expected = concat!(
            r#"{"n":4,"start":[1,2,1],"steps":["#,
            r#"{"op":"r3","pos":0},"#,
            r#"{"op":"birth","pos":2,"gen":3,"sign":-1},"#,
            r#"{"op":"r2","pos":1},"#,
            r#"{"op":"r1","pos":2,"dir":"insert","gen":1,"sign":1},"#,
            r#"{"op":"r1","pos":2,"dir":"delete"},"#,
            r#"{"op":"death","pos":1}]}"#,
        );
        assert_eq!(movie.to_json(), expected);
        assert_eq!(BraidMovie::from_json(expected).unwrap(), movie);
    }

    #[test]
    fn replay_produces_wellformed_frames() {
        let frames: Vec<String> =
            six_step_movie().frames().unwrap().iter().map(|w| w.to_string()).collect();
        assert_eq!(
            frames,
            vec![
                "n=4; 1 2 1",
                "n=4; 2 1 2",
                "n=4; 2 1 -3 2",
                "n=4; 2 -3 1 2",
                "n=4; 2 -3 1 -1 1 2",
                "n=4; 2 -3 1 2",
                "n=4; 2 1 2"
            ]
        );
    }

    #[test]
    fn r3_requires_the_interleaved_pattern() {
        let w = word("n=3; 1 1 2");
        assert!(w.apply(&MovieStep::R3 { pos: 0 }).is_err());
        let text = r#"{"n":3,"start":[1,1,2],"steps":[{"op":"r3","pos":0}]}"#;
        assert!(matches!(BraidMovie::from_json(text), Err(BraidError::Step { index: 0, .. })));
    }

    #[test]
    fn r3_matches_the_braid_relation_catalog() {
        // Sign patterns (a, b, c) on g^a h^b g^c: all substitutions are braid
        // relations except the two alternating ones.
        for a in [1i32, -1] {
            for b in [1i32, -1] {
                for c in [1i32, -1] {
                    let w = BraidWord::new(3, vec![a, 2 * b, c]).unwrap();
                    let res = w.apply(&MovieStep::R3 { pos: 0 });
                    if a == c && b != a {
                        assert!(res.is_err(), "({a},{b},{c}) is not a relation");
                        continue;
                    }
                    let out = res.unwrap();
                    assert_eq!(out.letters(), &[2 * c, b, 2 * a]);
                    // The substitution is an involution.
                    assert_eq!(out.apply(&MovieStep::R3 { pos: 0 }).unwrap(), w);
                }
            }
        }
        assert_eq!(
            word("n=3; 1 2 1").apply(&MovieStep::R3 { pos: 0 }).unwrap(),
            word("n=3; 2 1 2")
        );
    }

    #[test]
    fn polarity_counts_type_two_steps_by_sign() {
        let pure = BraidMovie {
            start: word("n=3; 1 -1 2"),
            steps: vec![MovieStep::R1 { pos: 0, mv: R1Move::Delete }, MovieStep::R1 {
                pos: 0,
                mv: R1Move::Insert { gen: 2, sign: -1 },
            }],
        };
        assert_eq!(pure.polarity().unwrap(), (0, 0));

        let one_birth = BraidMovie {
            start: BraidWord::empty(3),
            steps: vec![MovieStep::Birth { pos: 0, gen: 2, sign: 1 }],
        };
        assert_eq!(one_birth.polarity().unwrap(), (1, 0));

        let two_negative = BraidMovie {
            start: BraidWord::empty(2),
            steps: vec![
                MovieStep::Birth { pos: 0, gen: 1, sign: -1 },
                MovieStep::Birth { pos: 0, gen: 1, sign: -1 },
            ],
        };
        assert_eq!(two_negative.polarity().unwrap(), (0, 2));

        // A death is positive exactly when the dying letter is negative.
        let deaths = BraidMovie {
            start: word("n=2; 1 -1"),
            steps: vec![MovieStep::Death { pos: 1 }, MovieStep::Death { pos: 0 }],
        };
        assert_eq!(deaths.polarity().unwrap(), (1, 1));
    }

    #[test]
    fn composition_checks_the_boundary_and_adds_polarity() {
        let m1 = BraidMovie {
            start: BraidWord::empty(3),
            steps: vec![MovieStep::Birth { pos: 0, gen: 1, sign: -1 }],
        };
        let m2 = BraidMovie {
            start: word("n=3; -1"),
            steps: vec![MovieStep::Birth { pos: 1, gen: 2, sign: 1 }],
        };
        let m = compose_movies(&m1, &m2).unwrap();
        assert_eq!(m.end().unwrap(), word("n=3; -1 2"));
        let (p1, n1) = m1.polarity().unwrap();
        let (p2, n2) = m2.polarity().unwrap();
        assert_eq!(m.polarity().unwrap(), (p1 + p2, n1 + n2));

        assert!(compose_movies(&m2, &m1).is_err());
        let id = BraidMovie::identity(m1.end().unwrap());
        assert_eq!(compose_movies(&m1, &id).unwrap(), m1);
    }

    #[test]
    fn parallel_movies_run_on_disjoint_strands() {
        let m1 = BraidMovie {
            start: BraidWord::empty(2),
            steps: vec![MovieStep::Birth { pos: 0, gen: 1, sign: 1 }],
        };
        let m2 = BraidMovie {
            start: BraidWord::empty(2),
            steps: vec![MovieStep::Birth { pos: 0, gen: 1, sign: -1 }],
        };
        let m = parallel_movies(&m1, &m2).unwrap();
        assert_eq!(m.strands(), 4);
        assert_eq!(m.end().unwrap(), word("n=4; 1 -3"));
        assert_eq!(m.polarity().unwrap(), (1, 1));
    }

    #[test]
    fn random_movies_replay_and_are_seed_deterministic() {
        let start = word("n=3; 1 -2");
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let m1 = random_movie(&start, 30, 6, false, &mut rng);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let m2 = random_movie(&start, 30, 6, false, &mut rng);
        assert_eq!(m1, m2);
        assert!(m1.validate().is_ok());
        for frame in m1.frames().unwrap() {
            assert!(frame.len() <= 6);
        }

        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let pos = random_movie(&start, 30, 6, true, &mut rng);
        assert_eq!(pos.polarity().unwrap().1, 0);
    }

    proptest! {
        #[test]
        fn writhe_changes_by_the_signed_branch_count(seed in 0u64..200) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let strands = rng.gen_range(2..5);
            let start = random_word(strands, rng.gen_range(0..4), &mut rng);
            let m = random_movie(&start, 20, 7, seed % 2 == 0, &mut rng);
            let (p, q) = m.polarity().unwrap();
            let end = m.end().unwrap();
            prop_assert_eq!(end.writhe() - start.writhe(), p as i64 - q as i64);
        }
    }
}
