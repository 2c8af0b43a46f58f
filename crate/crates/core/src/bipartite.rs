// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Maximum bipartite matching by repeated BFS augmentation.

use std::collections::VecDeque;

pub const FREE: u32 = u32::MAX;

/// Matches left vertices `0..adj.len()` into right vertices `0..right`.
/// Neighbours are tried in list order. Returns the mate of every left
/// vertex (`FREE` if unmatched).
pub fn max_matching(adj: &[Vec<u32>], right: usize) -> Vec<u32> {
    let mut mate_l = vec![FREE; adj.len()];
    let mut mate_r = vec![FREE; right];
    // Greedy start.
    for (l, ns) in adj.iter().enumerate() {
        if let Some(&r) = ns.iter().find(|&&r| mate_r[r as usize] == FREE) {
            mate_l[l] = r;
            mate_r[r as usize] = l as u32;
        }
    }
    let mut prev = vec![FREE; right];
    let mut stamp = vec![0u32; right];
    let mut round = 0u32;
    for start in 0..adj.len() {
        if mate_l[start] != FREE {
            continue;
        }
        round += 1;
        let mut queue = VecDeque::from([start as u32]);
        'search: while let Some(l) = queue.pop_front() {
            for &r in &adj[l as usize] {
                if stamp[r as usize] == round {
                    continue;
                }
                stamp[r as usize] = round;
                prev[r as usize] = l;
                let m = mate_r[r as usize];
                if m == FREE {
                    let mut r = r;
                    loop {
                        let l = prev[r as usize];
                        let next = mate_l[l as usize];
                        mate_l[l as usize] = r;
                        mate_r[r as usize] = l;
                        if next == FREE {
                            break;
                        }
                        r = next;
                    }
                    break 'search;
                }
                queue.push_back(m);
            }
        }
    }
    mate_l
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn needs_augmentation() {
        // Greedy takes 0-0, then 1 must reroute 0 to 1.
        let adj = vec![vec![0, 1], vec![0]];
        assert_eq!(max_matching(&adj, 2), vec![1, 0]);
    }

    #[test]
    fn deficient_side_stays_free() {
        let adj = vec![vec![0], vec![0], vec![1]];
        let m = max_matching(&adj, 2);
        assert_eq!(m.iter().filter(|&&x| x != FREE).count(), 2);
    }
}
