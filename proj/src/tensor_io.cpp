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

#include "ddcs/tensor_io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <memory>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little,
              "tensor files are little-endian; big-endian hosts are not supported");

namespace ddcs {

namespace {

constexpr char kTensorMagic[4] = {'D', 'D', 'C', 'S'};
constexpr char kCalMagic[4] = {'D', 'D', 'C', 'C'};
constexpr std::uint32_t kVersion = 1;

void fwrite_checked(const void *p, std::size_t size, std::size_t count, std::FILE *f,
                    const std::string &path) {
    if (std::fwrite(p, size, count, f) != count)
        throw std::runtime_error("short write to '" + path + "'");
}

void fread_checked(void *p, std::size_t size, std::size_t count, std::FILE *f,
                   const std::string &path) {
    if (std::fread(p, size, count, f) != count)
        throw std::runtime_error("'" + path + "': truncated file");
}

struct FileCloser {
    void operator()(std::FILE *f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_or_throw(const std::string &path, const char *mode) {
    std::FILE *f = std::fopen(path.c_str(), mode);
    if (!f) throw std::runtime_error("cannot open '" + path + "'");
    return FilePtr(f);
}

void write_header(std::FILE *f, const std::string &path, const std::uint32_t dims[5],
                  double center_hz, double spacing_hz, std::span<const double> timestamps) {
    fwrite_checked(kTensorMagic, 1, 4, f, path);
    fwrite_checked(&kVersion, sizeof(kVersion), 1, f, path);
    fwrite_checked(dims, sizeof(std::uint32_t), 5, f, path);
    fwrite_checked(&center_hz, sizeof(double), 1, f, path);
    fwrite_checked(&spacing_hz, sizeof(double), 1, f, path);
    fwrite_checked(timestamps.data(), sizeof(double), timestamps.size(), f, path);
}

} // namespace

void write_tensor_file(const std::string &path, const MeasurementTensor &tensor) {
    auto f = open_or_throw(path, "wb");
    const std::uint32_t dims[5] = {
        static_cast<std::uint32_t>(tensor.n_burst), static_cast<std::uint32_t>(tensor.n_snapshot),
        static_cast<std::uint32_t>(tensor.n_tx), static_cast<std::uint32_t>(tensor.n_rx),
        static_cast<std::uint32_t>(tensor.n_tone)};
    write_header(f.get(), path, dims, tensor.config.waveform.center_frequency_hz,
                 tensor.config.waveform.tone_spacing_hz, tensor.timestamps);
    fwrite_checked(tensor.data.data(), sizeof(std::complex<float>), tensor.data.size(), f.get(), path);
}

TensorFile read_tensor_file(const std::string &path) {
    auto f = open_or_throw(path, "rb");
    char magic[4];
    fread_checked(magic, 1, 4, f.get(), path);
    if (std::memcmp(magic, kTensorMagic, 4) != 0)
        throw std::runtime_error("'" + path + "': not a DDCS tensor file");
    std::uint32_t version = 0;
    fread_checked(&version, sizeof(version), 1, f.get(), path);
    if (version != kVersion)
        throw std::runtime_error("'" + path + "': unsupported version " + std::to_string(version));
    std::uint32_t dims[5];
    fread_checked(dims, sizeof(std::uint32_t), 5, f.get(), path);
    constexpr std::uint64_t kMaxElements = 1ULL << 33;
    std::uint64_t total = 1;
    for (std::uint32_t d : dims) {
        if (d == 0) throw std::runtime_error("'" + path + "': zero dimension");
        total *= d;
        if (total > kMaxElements) throw std::runtime_error("'" + path + "': implausible dimensions");
    }
    TensorFile t;
    t.n_burst = static_cast<int>(dims[0]);
    t.n_snapshot = static_cast<int>(dims[1]);
    t.n_tx = static_cast<int>(dims[2]);
    t.n_rx = static_cast<int>(dims[3]);
    t.n_tone = static_cast<int>(dims[4]);
    fread_checked(&t.center_frequency_hz, sizeof(double), 1, f.get(), path);
    fread_checked(&t.tone_spacing_hz, sizeof(double), 1, f.get(), path);
    const std::size_t n_ts = static_cast<std::size_t>(dims[0]) * dims[1] * dims[2] * dims[3];
    t.timestamps.resize(n_ts);
    fread_checked(t.timestamps.data(), sizeof(double), n_ts, f.get(), path);
    t.data.resize(total);
    fread_checked(t.data.data(), sizeof(std::complex<float>), total, f.get(), path);
    // Anything left over means the writer and reader disagree about the layout.
    char probe;
    if (std::fread(&probe, 1, 1, f.get()) != 0)
        throw std::runtime_error("'" + path + "': trailing bytes after tensor payload");
    return t;
}

TensorFileWriter::TensorFileWriter(const std::string &path, const SounderConfig &config)
    : path_(path) {
    config.validate();
    std::FILE *f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("cannot open '" + path + "'");
    file_ = f;
    bursts_expected_ = config.burst_count;
    burst_elements_ = static_cast<std::size_t>(config.snapshots_per_burst) * config.pair_count() *
                      static_cast<std::size_t>(config.waveform.tone_count);
    const std::uint32_t dims[5] = {static_cast<std::uint32_t>(config.burst_count),
                                   static_cast<std::uint32_t>(config.snapshots_per_burst),
                                   static_cast<std::uint32_t>(config.tx_grid.beam_count()),
                                   static_cast<std::uint32_t>(config.rx_grid.beam_count()),
                                   static_cast<std::uint32_t>(config.waveform.tone_count)};
    const auto ts = campaign_timestamps(config);
    write_header(f, path_, dims, config.waveform.center_frequency_hz,
                 config.waveform.tone_spacing_hz, ts);
}

TensorFileWriter::~TensorFileWriter() {
    if (file_) {
        std::fclose(static_cast<std::FILE *>(file_));
        // Incomplete writers leave no partial file behind.
        if (!finished_) std::remove(path_.c_str());
    }
}

void TensorFileWriter::write_burst(std::span<const std::complex<float>> burst_data) {
    if (finished_) throw std::logic_error("TensorFileWriter: already finished");
    if (burst_data.size() != burst_elements_)
        throw std::invalid_argument("TensorFileWriter: burst size mismatch");
    if (bursts_written_ >= bursts_expected_)
        throw std::logic_error("TensorFileWriter: too many bursts");
    fwrite_checked(burst_data.data(), sizeof(std::complex<float>), burst_data.size(),
                   static_cast<std::FILE *>(file_), path_);
    ++bursts_written_;
}

void TensorFileWriter::finish() {
    if (bursts_written_ != bursts_expected_)
        throw std::logic_error("TensorFileWriter: wrote " + std::to_string(bursts_written_) +
                               " of " + std::to_string(bursts_expected_) + " bursts");
    if (std::fclose(static_cast<std::FILE *>(file_)) != 0) {
        file_ = nullptr;
        throw std::runtime_error("close failed for '" + path_ + "'");
    }
    file_ = nullptr;
    finished_ = true;
}

void write_calibration_file(const std::string &path, const CalibrationResponse &cal) {
    cal.validate();
    auto f = open_or_throw(path, "wb");
    fwrite_checked(kCalMagic, 1, 4, f.get(), path);
    fwrite_checked(&kVersion, sizeof(kVersion), 1, f.get(), path);
    const std::uint32_t n = static_cast<std::uint32_t>(cal.gain.size());
    fwrite_checked(&n, sizeof(n), 1, f.get(), path);
    fwrite_checked(cal.gain.data(), sizeof(std::complex<double>), cal.gain.size(), f.get(), path);
}

CalibrationResponse read_calibration_file(const std::string &path) {
    auto f = open_or_throw(path, "rb");
    char magic[4];
    fread_checked(magic, 1, 4, f.get(), path);
    if (std::memcmp(magic, kCalMagic, 4) != 0)
        throw std::runtime_error("'" + path + "': not a calibration file");
    std::uint32_t version = 0, n = 0;
    fread_checked(&version, sizeof(version), 1, f.get(), path);
    if (version != kVersion)
        throw std::runtime_error("'" + path + "': unsupported version");
    fread_checked(&n, sizeof(n), 1, f.get(), path);
    if (n == 0 || n > (1u << 20)) throw std::runtime_error("'" + path + "': implausible tone count");
    CalibrationResponse cal;
    cal.gain.resize(n);
    fread_checked(cal.gain.data(), sizeof(std::complex<double>), n, f.get(), path);
    cal.validate();
    return cal;
}

bool file_exists(const std::string &path) {
    std::error_code ec;
    return std::filesystem::exists(path, ec);
}

} // namespace ddcs
