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

#include "altref/arena.hpp"
#include "altref/reductions.hpp"

#include <sstream>
#include <string>

namespace altref {

/// Human-readable name of a game vertex, e.g. "⟨0,1⟩", "⟨T2,1,#⟩", "⟨T2,T'0⟩".
inline std::string vertex_label(const VertexDecode& d, int v)
{
    const VertexInfo& vi = d[v];
    const std::string l = std::to_string(vi.first);
    const std::string r = std::to_string(vi.second);
    switch (vi.kind) {
    case VertexKind::Pair: return "⟨" + l + "," + r + "⟩";
    case VertexKind::Hash: return "⟨T" + l + "," + r + ",#⟩";
    case VertexKind::SetPair: return "⟨T" + l + ",T'" + r + "⟩";
    case VertexKind::Dollar: return d.set_valued ? "⟨T" + l + "," + r + ",$⟩" : "⟨" + l + "," + r + ",$⟩";
    case VertexKind::Frown: return "FROWN";
    case VertexKind::WinSink: return "WINSINK";
    }
    return "?";
}

/// Graphviz rendering: player-1 vertices as boxes, player-2 vertices as
/// diamonds, target vertices doubled, priorities in the label. Vertices and
/// edges appear in ascending id order.
inline std::string to_dot(const GameArena& g, const VertexDecode* decode = nullptr, const std::string& name = "game")
{
    std::ostringstream os;
    os << "digraph " << name << " {\n";
    for (int v = 0; v < g.num_vertices(); ++v) {
        std::string label = decode ? vertex_label(*decode, v) : std::to_string(v);
        if (g.has_priorities()) label += "\\np=" + std::to_string(g.priority(v));
        os << "  v" << v << " [shape=" << (g.owner(v) == Player::One ? "box" : "diamond") << ", label=\"" << label
           << "\"";
        if (g.has_target() && g.target()[v]) os << ", peripheries=2";
        os << "];\n";
    }
    for (int v = 0; v < g.num_vertices(); ++v)
        for (int w : g.out(v)) os << "  v" << v << " -> v" << w << ";\n";
    os << "}\n";
    return os.str();
}

} // namespace altref
