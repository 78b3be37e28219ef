// Copyright 2026 The wenduality Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <vector>

#include "wenduality/duality.hpp"
#include "wenduality/wen_model.hpp"

namespace wenduality {

/// An ED ground state in a single label sector, ready for measurements.
struct PreparedGround {
    RealStateVector state;
    double energy = 0.0;
    double gap = 0.0;
    int degeneracy = 0;
    LabelValues labels;
    std::vector<std::string> projected;  // labels fixed by projection, as name=value
    double projection_weight = 1.0;
    bool dense = false;
    int matvecs = 0;
};

inline PreparedGround prepare_ground_state(const HamiltonianSpec& hs, SolverChoice solver = SolverChoice::Auto,
                                           LanczosOptions opts = {}) {
    const auto spec = ground_spectrum(hs, 2, true, solver, opts);
    PreparedGround out;
    out.energy = spec.ground_energy;
    out.gap = spec.gap;
    out.degeneracy = spec.ground_degeneracy;
    out.dense = spec.dense;
    out.matvecs = spec.iterations;
    const auto d = dual_structure(hs.lattice);
    auto proj = project_to_sector(d, spec.eigenvectors.front());
    out.state = std::move(proj.state);
    out.labels = proj.labels;
    out.projection_weight = proj.weight;
    for (int l : proj.projected) {
        out.projected.push_back(d.labels[static_cast<std::size_t>(l)].name() + "=" +
                                (proj.labels[static_cast<std::size_t>(l)] > 0 ? "+1" : "-1"));
    }
    return out;
}

}  // namespace wenduality
