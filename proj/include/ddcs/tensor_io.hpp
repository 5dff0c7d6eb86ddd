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
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ddcs/sounder.hpp"
#include "ddcs/waveform.hpp"

namespace ddcs {

// Measurement tensor file, little-endian:
//   magic "DDCS", version u32 = 1,
//   dims 5 x u32 [burst][snapshot][txBeam][rxBeam][tone],
//   center frequency f64 Hz, tone spacing f64 Hz,
//   timestamps f64 [burst][snapshot][pair] (seconds),
//   data interleaved (re, im) f32 in [burst][snapshot][txBeam][rxBeam][tone] order.

/// Tensor contents as read back from a file (header + payload, no config echo).
struct TensorFile {
    int n_burst = 0, n_snapshot = 0, n_tx = 0, n_rx = 0, n_tone = 0;
    double center_frequency_hz = 0.0;
    double tone_spacing_hz = 0.0;
    std::vector<double> timestamps;
    std::vector<std::complex<float>> data;

    std::size_t tone_offset(int b, int s, int i, int j) const {
        return (((static_cast<std::size_t>(b) * n_snapshot + s) * n_tx + i) * n_rx + j) *
               static_cast<std::size_t>(n_tone);
    }
    std::span<const std::complex<float>> tones(int b, int s, int i, int j) const {
        return {data.data() + tone_offset(b, s, i, j), static_cast<std::size_t>(n_tone)};
    }
    double timestamp(int b, int s, int pair) const {
        return timestamps[(static_cast<std::size_t>(b) * n_snapshot + s) *
                              (static_cast<std::size_t>(n_tx) * n_rx) +
                          pair];
    }
};

void write_tensor_file(const std::string &path, const MeasurementTensor &tensor);
TensorFile read_tensor_file(const std::string &path);

/// Streaming writer: header and timestamps up front, then one burst at a time.
class TensorFileWriter {
  public:
    TensorFileWriter(const std::string &path, const SounderConfig &config);
    ~TensorFileWriter();
    TensorFileWriter(const TensorFileWriter &) = delete;
    TensorFileWriter &operator=(const TensorFileWriter &) = delete;

    /// Burst payload in [snapshot][tx][rx][tone] order; bursts must arrive in order.
    void write_burst(std::span<const std::complex<float>> burst_data);
    void finish();

  private:
    void *file_ = nullptr;
    std::string path_;
    int bursts_written_ = 0;
    int bursts_expected_ = 0;
    std::size_t burst_elements_ = 0;
    bool finished_ = false;
};

// Calibration sidecar ("<tensor>.cal"): magic "DDCC", version u32 = 1,
// tone count u32, then (re, im) f64 per tone. The tensor format itself does
// not carry the calibration, so simulate emits this next to the tensor and
// evaluate picks it up when present (identity otherwise).

void write_calibration_file(const std::string &path, const CalibrationResponse &cal);
CalibrationResponse read_calibration_file(const std::string &path);
bool file_exists(const std::string &path);

} // namespace ddcs
