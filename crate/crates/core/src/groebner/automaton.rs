//! Aho-Corasick style automaton recognising words that contain one of a set
//! of forbidden factors, used to count normal words degree by degree.

use std::collections::VecDeque;

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone)]
pub struct ForbiddenFactorAutomaton {
    alphabet: usize,
    /// Complete transition table, `state * alphabet + letter`.
    goto: Vec<u32>,
    /// A state is dead once the word read so far contains a forbidden factor.
    dead: Vec<bool>,
}

impl ForbiddenFactorAutomaton {
    pub fn new<'a, I>(alphabet: usize, factors: I) -> Self
    where
        I: IntoIterator<Item = &'a [u16]>,
    {
        let mut goto = vec![NONE; alphabet];
        let mut dead = vec![false];
        for f in factors {
            let mut s = 0usize;
            for &x in f {
                let slot = s * alphabet + x as usize;
                if goto[slot] == NONE {
                    goto[slot] = dead.len() as u32;
                    dead.push(false);
                    goto.extend(std::iter::repeat_n(NONE, alphabet));
                }
                s = goto[slot] as usize;
            }
            dead[s] = true;
        }

        // Breadth-first completion of the trie into a DFA.
        let mut fail = vec![0u32; dead.len()];
        let mut queue = VecDeque::new();
        for x in 0..alphabet {
            match goto[x] {
                NONE => goto[x] = 0,
                t => {
                    fail[t as usize] = 0;
                    queue.push_back(t as usize);
                }
            }
        }
        while let Some(s) = queue.pop_front() {
            let f = fail[s] as usize;
            if dead[f] {
                dead[s] = true;
            }
            for x in 0..alphabet {
                let slot = s * alphabet + x;
                match goto[slot] {
                    NONE => goto[slot] = goto[f * alphabet + x],
                    t => {
                        fail[t as usize] = goto[f * alphabet + x];
                        queue.push_back(t as usize);
                    }
                }
            }
        }
        ForbiddenFactorAutomaton {
            alphabet,
            goto,
            dead,
        }
    }

    pub fn num_states(&self) -> usize {
        self.dead.len()
    }

    /// Whether `word` avoids every forbidden factor.
    pub fn accepts(&self, word: &[u16]) -> bool {
        let mut s = 0usize;
        for &x in word {
            s = self.goto[s * self.alphabet + x as usize] as usize;
            if self.dead[s] {
                return false;
            }
        }
        !self.dead[0]
    }

    /// Number of accepted words of each weighted degree `0..=up_to`, by
    /// dynamic programming over states. `None` on `u64` overflow.
    pub fn count_by_degree(&self, weights: &[u32], up_to: usize) -> Option<Vec<u64>> {
        assert_eq!(weights.len(), self.alphabet);
        if self.dead[0] {
            return Some(vec![0; up_to + 1]);
        }
        let states = self.num_states();
        let window = weights.iter().copied().max().unwrap_or(1) as usize + 1;
        let mut layers = vec![vec![0u64; states]; window];
        layers[0][0] = 1;
        let mut out = Vec::with_capacity(up_to + 1);
        for d in 0..=up_to {
            let cur = std::mem::take(&mut layers[d % window]);
            let mut total = 0u64;
            for (s, &c) in cur.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                total = total.checked_add(c)?;
                for (x, &w) in weights.iter().enumerate() {
                    let e = d + w as usize;
                    if e > up_to {
                        continue;
                    }
                    let t = self.goto[s * self.alphabet + x] as usize;
                    if self.dead[t] {
                        continue;
                    }
                    let layer = &mut layers[e % window];
                    let slot = &mut layer[t];
                    *slot = slot.checked_add(c)?;
                }
            }
            out.push(total);
            layers[d % window] = vec![0u64; states];
        }
        Some(out)
    }
}
