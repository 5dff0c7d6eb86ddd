// SPDX-License-Identifier: Apache-2.0
//
// ddcs - simulator for dynamic double-directional mm-wave channel sounding
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

#include "ddcs/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace ddcs {

namespace {
// The FFTW planner is not thread-safe; executions on distinct buffers are.
std::mutex &planner_mutex() {
    static std::mutex m;
    return m;
}
} // namespace

Dft::Dft(std::size_t n) : n_(n) {
    if (n == 0) throw std::invalid_argument("Dft: size must be positive");
    in_buf_ = fftw_malloc(sizeof(fftw_complex) * n);
    out_buf_ = fftw_malloc(sizeof(fftw_complex) * n);
    if (!in_buf_ || !out_buf_) throw std::bad_alloc();
    std::lock_guard<std::mutex> lock(planner_mutex());
    // FFTW_ESTIMATE keeps plan selection deterministic across runs.
    plan_fwd_ = fftw_plan_dft_1d(static_cast<int>(n), static_cast<fftw_complex *>(in_buf_),
                                 static_cast<fftw_complex *>(out_buf_), FFTW_FORWARD, FFTW_ESTIMATE);
    plan_inv_ = fftw_plan_dft_1d(static_cast<int>(n), static_cast<fftw_complex *>(in_buf_),
                                 static_cast<fftw_complex *>(out_buf_), FFTW_BACKWARD, FFTW_ESTIMATE);
}

Dft::~Dft() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(plan_inv_));
    fftw_free(in_buf_);
    fftw_free(out_buf_);
}

void Dft::forward(const std::complex<double> *in, std::complex<double> *out) {
    std::memcpy(in_buf_, in, sizeof(fftw_complex) * n_);
    fftw_execute(static_cast<fftw_plan>(plan_fwd_));
    std::memcpy(out, out_buf_, sizeof(fftw_complex) * n_);
}

void Dft::inverse(const std::complex<double> *in, std::complex<double> *out) {
    std::memcpy(in_buf_, in, sizeof(fftw_complex) * n_);
    fftw_execute(static_cast<fftw_plan>(plan_inv_));
    std::memcpy(out, out_buf_, sizeof(fftw_complex) * n_);
}

std::vector<std::complex<double>> Dft::forward(const std::vector<std::complex<double>> &in) {
    if (in.size() != n_) throw std::invalid_argument("Dft::forward: size mismatch");
    std::vector<std::complex<double>> out(n_);
    forward(in.data(), out.data());
    return out;
}

std::vector<std::complex<double>> Dft::inverse(const std::vector<std::complex<double>> &in) {
    if (in.size() != n_) throw std::invalid_argument("Dft::inverse: size mismatch");
    std::vector<std::complex<double>> out(n_);
    inverse(in.data(), out.data());
    return out;
}

Dft &dft_for(std::size_t n) {
    thread_local std::map<std::size_t, std::unique_ptr<Dft>> cache;
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, std::make_unique<Dft>(n)).first;
    return *it->second;
}

} // namespace ddcs
