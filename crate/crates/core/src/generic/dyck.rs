use std::fmt;
use std::str::FromStr;

use crate::generic::GenericError;

/// Largest `n` accepted by [`enumerate_dyck`]; `C_12 = 208012`.
pub const DYCK_CAP: usize = 12;

/// A balanced bracket word of length `2n` with its matching table.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DyckWord {
    open: Vec<bool>,
    partner: Vec<usize>,
}

impl DyckWord {
    pub fn new(open: Vec<bool>) -> Result<Self, GenericError> {
        let mut partner = vec![0; open.len()];
        let mut stack = Vec::new();
        for (i, &o) in open.iter().enumerate() {
            if o {
                stack.push(i);
            } else {
                let j = stack.pop().ok_or(GenericError::NotDyck)?;
                partner[i] = j;
                partner[j] = i;
            }
        }
        if !stack.is_empty() {
            return Err(GenericError::NotDyck);
        }
        Ok(DyckWord { open, partner })
    }

    /// Half the length.
    pub fn n(&self) -> usize {
        self.open.len() / 2
    }

    pub fn len(&self) -> usize {
        self.open.len()
    }

    pub fn is_empty(&self) -> bool {
        self.open.is_empty()
    }

    pub fn is_open(&self, i: usize) -> bool {
        self.open[i]
    }

    /// The position matched with `i`.
    pub fn partner(&self, i: usize) -> usize {
        self.partner[i]
    }

    /// Matching pairs `(i, j)` with `i < j`, by opening position.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.len()).filter(|&i| self.open[i]).map(|i| (i, self.partner[i]))
    }

    /// The number of adjacent pairs `()`.
    pub fn adjacent_pairs(&self) -> usize {
        self.open.windows(2).filter(|w| w[0] && !w[1]).count()
    }
}

impl fmt::Display for DyckWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &o in &self.open {
            f.write_str(if o { "(" } else { ")" })?;
        }
        Ok(())
    }
}

impl FromStr for DyckWord {
    type Err = GenericError;

    /// Accepts `(`/`)` or `⌊`/`⌉`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let open = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '(' | '⌊' => Ok(true),
                ')' | '⌉' => Ok(false),
                _ => Err(GenericError::NotDyck),
            })
            .collect::<Result<Vec<_>, _>>()?;
        DyckWord::new(open)
    }
}

/// All Dyck words of length `2n`, in lexicographic order with `(` first.
pub fn enumerate_dyck(n: usize) -> Result<Vec<DyckWord>, GenericError> {
    if n > DYCK_CAP {
        return Err(GenericError::DyckCap { n, cap: DYCK_CAP });
    }
    let mut out = Vec::with_capacity(catalan(n) as usize);
    let mut cur = Vec::with_capacity(2 * n);
    fn go(n: usize, opened: usize, closed: usize, cur: &mut Vec<bool>, out: &mut Vec<DyckWord>) {
        if closed == n {
            out.push(DyckWord::new(cur.clone()).expect("balanced by construction"));
            return;
        }
        if opened < n {
            cur.push(true);
            go(n, opened + 1, closed, cur, out);
            cur.pop();
        }
        if closed < opened {
            cur.push(false);
            go(n, opened, closed + 1, cur, out);
            cur.pop();
        }
    }
    go(n, 0, 0, &mut cur, &mut out);
    Ok(out)
}

/// The `n`-th Catalan number.
pub fn catalan(n: usize) -> u64 {
    let mut c = 1u64;
    for i in 0..n as u64 {
        c = c * 2 * (2 * i + 1) / (i + 2);
    }
    c
}
