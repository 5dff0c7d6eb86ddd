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

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace ddcs {

/// Thin wrapper around FFTW plans for one transform size. Instances are not
/// thread-safe; use dft_for() to get a thread-local cached instance.
/// Conventions: forward applies sum_k x_k e^{-j2pi kn/N}, inverse applies
/// sum_k x_k e^{+j2pi kn/N}; neither is normalized.
class Dft {
  public:
    explicit Dft(std::size_t n);
    ~Dft();
    Dft(const Dft &) = delete;
    Dft &operator=(const Dft &) = delete;

    std::size_t size() const { return n_; }

    void forward(const std::complex<double> *in, std::complex<double> *out);
    void inverse(const std::complex<double> *in, std::complex<double> *out);

    std::vector<std::complex<double>> forward(const std::vector<std::complex<double>> &in);
    std::vector<std::complex<double>> inverse(const std::vector<std::complex<double>> &in);

  private:
    std::size_t n_;
    void *in_buf_;
    void *out_buf_;
    void *plan_fwd_;
    void *plan_inv_;
};

/// Thread-local plan cache.
Dft &dft_for(std::size_t n);

} // namespace ddcs
