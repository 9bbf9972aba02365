/*
 * Copyright 2026 The altref Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "altref/systems.hpp"

namespace altref {

/// Dense numbering of the successor sets Succ(w,a) = { delta(w,a,b) : b in P2(w) }.
///
/// Ids follow the lexicographic order of the sets' characteristic vectors
/// over states 0..|W|-1 with "absent" before "present". `members(id)` returns
/// the ascending member list and `succ_of(w, a)` the id of Succ(w,a).
class SuccIndex {
public:
    SuccIndex() = default;

    int count() const { return static_cast<int>(offsets_.size()) - 1; }
    int num_states() const { return num_states_; }
    int num_actions1() const { return num_actions1_; }

    std::span<const int> members(int id) const
    {
        if (id < 0 || id >= count())
            throw std::out_of_range("successor-set id " + std::to_string(id) + " out of range");
        return {flat_.data() + offsets_[id], flat_.data() + offsets_[id + 1]};
    }

    int succ_of(int w, int a) const
    {
        if (w < 0 || w >= num_states_ || a < 0 || a >= num_actions1_)
            throw std::out_of_range("state/action out of range");
        const int id = h_[static_cast<std::size_t>(w) * num_actions1_ + a];
        if (id < 0)
            throw std::invalid_argument("action " + std::to_string(a) + " is not enabled at state " +
                                        std::to_string(w));
        return id;
    }

    /// Nodes the construction trie reached (it is released after the build).
    std::size_t trie_nodes() const { return trie_nodes_; }

    /// Cells held by g and h.
    std::size_t cells() const { return flat_.size() + offsets_.size() + h_.size(); }

    friend SuccIndex build_succ_index(const Ats& k);

private:
    int num_states_ = 0;
    int num_actions1_ = 0;
    std::vector<int> h_;
    std::vector<int> offsets_{0};
    std::vector<int> flat_;
    std::size_t trie_nodes_ = 0;
};

namespace detail {

// Binary trie of depth |W|; child[0] is "state absent", child[1] "present".
struct SetTrie {
    struct Node {
        std::array<int, 2> child{-1, -1};
        int parent = -1;
        int leaf_id = -1;
    };
    std::vector<Node> nodes{Node{}};
    std::vector<int> leaves;

    int insert(const std::vector<char>& bits)
    {
        int cur = 0;
        for (char bit : bits) {
            const int side = bit ? 1 : 0;
            if (nodes[cur].child[side] < 0) {
                nodes[cur].child[side] = static_cast<int>(nodes.size());
                Node fresh;
                fresh.parent = cur;
                nodes.push_back(fresh);
            }
            cur = nodes[cur].child[side];
        }
        return cur;
    }

    int find(const std::vector<char>& bits) const
    {
        int cur = 0;
        for (char bit : bits) cur = nodes[cur].child[bit ? 1 : 0];
        return cur;
    }
};

inline void successor_bits(const Ats& k, int w, int a, std::vector<char>& bits)
{
    std::fill(bits.begin(), bits.end(), 0);
    for (int b : k.enabled2[w]) bits[k.next(w, a, b)] = 1;
}

} // namespace detail

/// Builds the index in O(|W|·|A1|·(|W|+|A2|)): every Succ(w,a) is inserted into
/// a depth-|W| binary trie, leaves are numbered by a left-first depth-first
/// traversal, g is filled by walking each leaf back to the root, and h by
/// re-walking each (w,a).
inline SuccIndex build_succ_index(const Ats& k)
{
    require_valid(k);
    const int n = k.num_states();
    const int na1 = k.num_actions1();
    SuccIndex idx;
    idx.num_states_ = n;
    idx.num_actions1_ = na1;
    idx.h_.assign(static_cast<std::size_t>(n) * na1, -1);

    detail::SetTrie trie;
    std::vector<char> bits(n);
    for (int w = 0; w < n; ++w) {
        for (int a : k.enabled1[w]) {
            detail::successor_bits(k, w, a, bits);
            trie.insert(bits);
        }
    }
    idx.trie_nodes_ = trie.nodes.size();

    // Depth-first, absent-branch first; leaves sit exactly at depth n.
    std::vector<std::pair<int, int>> stack{{0, 0}};
    int next_id = 0;
    while (!stack.empty()) {
        auto [node, depth] = stack.back();
        stack.pop_back();
        if (depth == n) {
            trie.nodes[node].leaf_id = next_id++;
            trie.leaves.push_back(node);
            continue;
        }
        const auto& ch = trie.nodes[node].child;
        if (ch[1] >= 0) stack.emplace_back(ch[1], depth + 1);
        if (ch[0] >= 0) stack.emplace_back(ch[0], depth + 1);
    }

    // g: walk each leaf to the root; the step taken at depth d decides state d.
    idx.offsets_.assign(1, 0);
    std::vector<int> members;
    for (int leaf : trie.leaves) {
        members.clear();
        int node = leaf;
        int depth = n;
        while (node != 0) {
            const int parent = trie.nodes[node].parent;
            --depth;
            if (trie.nodes[parent].child[1] == node) members.push_back(depth);
            node = parent;
        }
        idx.flat_.insert(idx.flat_.end(), members.rbegin(), members.rend());
        idx.offsets_.push_back(static_cast<int>(idx.flat_.size()));
    }

    for (int w = 0; w < n; ++w) {
        for (int a : k.enabled1[w]) {
            detail::successor_bits(k, w, a, bits);
            idx.h_[static_cast<std::size_t>(w) * na1 + a] = trie.nodes[trie.find(bits)].leaf_id;
        }
    }
    return idx;
}

} // namespace altref
