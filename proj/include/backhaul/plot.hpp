/* backhaul-sim
 * Copyright (C) 2026 the backhaul-sim developers
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
 * limitations under the License. */

#pragma once

#include <string>
#include <utility>
#include <vector>

namespace backhaul::plot {

// Minimal native SVG emission: fixed canvas, polylines, axis ticks, legend.
// Output is a pure function of the inputs (byte-stable for fixed data).

struct Series {
    std::string name;
    std::vector<std::pair<double, double>> points;  // (x, y)
};

// Errors: std::invalid_argument when no series or a series has no points.
std::string line_chart(const std::string& title, const std::string& x_label,
                       const std::string& y_label,
                       const std::vector<Series>& series);

struct HistogramBin {
    double lo = 0.0;
    double hi = 0.0;
    long count = 0;
};

// Vertical marker line with a label (e.g. mean, lower bound).
struct Overlay {
    std::string label;
    double x = 0.0;
};

// Errors: std::invalid_argument when bins are empty.
std::string histogram_chart(const std::string& title, const std::string& x_label,
                            const std::vector<HistogramBin>& bins,
                            const std::vector<Overlay>& overlays);

}  // namespace backhaul::plot
