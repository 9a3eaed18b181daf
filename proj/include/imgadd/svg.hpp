// SPDX-License-Identifier: Apache-2.0
//
// Copyright (c) 2026 The imgadd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <string>
#include <vector>

namespace imgadd::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
  bool dashed = false;
};

struct PlotOptions {
  std::string title;
  std::string x_label = "angle (deg)";
  std::string y_label = "magnitude (dB)";
  double x_min = -90.0;
  double x_max = 90.0;
  double y_min = -80.0;
  double y_max = 0.0;
  double x_tick = 30.0;
  double y_tick = 10.0;
  int width = 720;
  int height = 440;
};

/// Self-contained SVG line plot. Points outside [y_min, y_max] are clipped to the frame.
std::string line_plot(const std::vector<Series>& series, const PlotOptions& opts);

}  // namespace imgadd::svg
