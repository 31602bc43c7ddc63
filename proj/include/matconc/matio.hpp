// Copyright 2026 The matconc authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <iosfwd>
#include <string>

#include "matconc/ustat.hpp"

namespace matconc {

// Plain-text matrix record: header "d1 d2", then row-major entries written as
// `re` or `re+imI` (for example `1.5-2.25I`). 17 significant digits, so
// the format round-trips doubles exactly.
void write_matrix(std::ostream& os, const Matrix& m);
Matrix read_matrix(std::istream& is);
void write_matrix_file(const std::string& path, const Matrix& m);
Matrix read_matrix_file(const std::string& path);

// Coefficient directory: one record per ordered pair, A_<i1>_<i2>.mat with
// 1-based indices and the zero diagonal omitted. n and d are inferred on load.
void export_coefficients(const ChaosCoefficients& a, const std::string& dir);
ChaosCoefficients import_coefficients(const std::string& dir);

// Kernel directory: manifest.txt carrying n, d and the support (label,
// payload, probability per point) plus kernel_<i1>_<i2>/<x>_<y>.mat records,
// all indices 1-based.
void export_kernel(const KernelTable& h, const DiscreteDistribution& p, const std::string& dir);
std::pair<KernelTable, DiscreteDistribution> import_kernel(const std::string& dir);

}  // namespace matconc
