use crate::error::{Error, Result};

/// Successor lists in CSR form. Repeated entries count as parallel steps.
#[derive(Debug, Clone)]
pub(crate) struct Successors {
    offsets: Vec<usize>,
    targets: Vec<usize>,
}

impl Successors {
    pub(crate) fn from_lists(lists: impl IntoIterator<Item = Vec<usize>>) -> Self {
        let mut offsets = vec![0];
        let mut targets = Vec::new();
        for list in lists {
            targets.extend(list);
            offsets.push(targets.len());
        }
        Self { offsets, targets }
    }

    pub(crate) fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    pub(crate) fn of(&self, s: usize) -> &[usize] {
        &self.targets[self.offsets[s]..self.offsets[s + 1]]
    }
}

/// `tr(M^r)` for `r = 1..=max_len`, where `M` is the 0/1-with-multiplicity
/// matrix of `succ`. Propagates walk counts from each start state, so the
/// cost follows the size of radius-`max_len` neighbourhoods.
pub(crate) fn closed_walk_traces(succ: &Successors, max_len: usize) -> Result<Vec<u128>> {
    let n = succ.len();
    let mut traces = vec![0u128; max_len];
    let mut cur = vec![0u128; n];
    let mut next = vec![0u128; n];
    let mut cur_list: Vec<usize> = Vec::new();
    let mut next_list: Vec<usize> = Vec::new();
    let overflow = || Error::ResourceLimit("closed walk count overflows 128 bits".into());
    for start in 0..n {
        cur[start] = 1;
        cur_list.push(start);
        for trace in traces.iter_mut() {
            for &s in &cur_list {
                let c = cur[s];
                for &t in succ.of(s) {
                    if next[t] == 0 {
                        next_list.push(t);
                    }
                    next[t] = next[t].checked_add(c).ok_or_else(overflow)?;
                }
            }
            *trace = trace.checked_add(next[start]).ok_or_else(overflow)?;
            for &s in &cur_list {
                cur[s] = 0;
            }
            cur_list.clear();
            std::mem::swap(&mut cur, &mut next);
            std::mem::swap(&mut cur_list, &mut next_list);
            if cur_list.is_empty() {
                break;
            }
        }
        for &s in &cur_list {
            cur[s] = 0;
        }
        cur_list.clear();
    }
    Ok(traces)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn directed_triangle() {
        let succ = Successors::from_lists(vec![vec![1], vec![2], vec![0]]);
        assert_eq!(closed_walk_traces(&succ, 6).unwrap(), vec![0, 0, 3, 0, 0, 3]);
    }

    #[test]
    fn multiplicities_count() {
        // two parallel loops at one state: tr(M^r) = 2^r
        let succ = Successors::from_lists(vec![vec![0, 0]]);
        assert_eq!(closed_walk_traces(&succ, 4).unwrap(), vec![2, 4, 8, 16]);
    }
}
