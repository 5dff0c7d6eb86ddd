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

#include "ddcs/config_text.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace ddcs {

namespace {

struct Entry {
    std::string key;
    std::vector<std::string> values; // one element for scalars
    bool is_array = false;
    int line = 0;
};

struct Section {
    std::string name; // empty for top level
    int line = 0;
    std::vector<Entry> entries;
};

std::string trim(const std::string &s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<Section> tokenize(const std::string &text) {
    std::vector<Section> sections;
    sections.push_back({"", 0, {}});
    std::istringstream is(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(is, raw)) {
        ++line_no;
        std::string line = raw;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError("unterminated section header", line_no);
            sections.push_back({trim(line.substr(1, line.size() - 2)), line_no, {}});
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected 'key = value'", line_no);
        Entry e;
        e.key = trim(line.substr(0, eq));
        e.line = line_no;
        std::string value = trim(line.substr(eq + 1));
        if (e.key.empty()) throw ParseError("empty key", line_no);
        if (value.empty()) throw ParseError("empty value for '" + e.key + "'", line_no);
        if (value.front() == '[') {
            if (value.back() != ']') throw ParseError("unterminated array", line_no);
            e.is_array = true;
            std::string body = value.substr(1, value.size() - 2);
            std::string tok;
            for (char c : body) {
                if (c == ',' || c == ' ' || c == '\t') {
                    if (!tok.empty()) e.values.push_back(tok);
                    tok.clear();
                } else {
                    tok += c;
                }
            }
            if (!tok.empty()) e.values.push_back(tok);
        } else {
            e.values.push_back(value);
        }
        sections.back().entries.push_back(e);
    }
    return sections;
}

double to_number(const std::string &s, int line) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw ParseError("expected a number, got '" + s + "'", line);
    }
}

/// Pull-style reader over one section; complains about keys it never served.
class SectionReader {
  public:
    explicit SectionReader(const Section &s) : section_(s) {}

    bool has(const std::string &key) const {
        for (const auto &e : section_.entries)
            if (e.key == key) return true;
        return false;
    }
    const Entry *find(const std::string &key) {
        consumed_.insert(key);
        for (const auto &e : section_.entries)
            if (e.key == key) return &e;
        return nullptr;
    }
    double number(const std::string &key, std::optional<double> fallback = {}) {
        const Entry *e = find(key);
        if (!e) {
            if (fallback) return *fallback;
            throw ParseError("missing key '" + key + "' in section [" + section_.name + "]",
                             section_.line);
        }
        if (e->is_array || e->values.size() != 1) throw ParseError("'" + key + "' must be a scalar", e->line);
        return to_number(e->values[0], e->line);
    }
    std::string word(const std::string &key, std::optional<std::string> fallback = {}) {
        const Entry *e = find(key);
        if (!e) {
            if (fallback) return *fallback;
            throw ParseError("missing key '" + key + "'", section_.line);
        }
        if (e->is_array || e->values.size() != 1) throw ParseError("'" + key + "' must be a scalar", e->line);
        return e->values[0];
    }
    std::vector<double> numbers(const std::string &key, std::size_t expect = 0) {
        const Entry *e = find(key);
        if (!e) throw ParseError("missing key '" + key + "'", section_.line);
        if (!e->is_array) throw ParseError("'" + key + "' must be an array", e->line);
        if (expect && e->values.size() != expect)
            throw ParseError("'" + key + "' expects " + std::to_string(expect) + " values", e->line);
        std::vector<double> out;
        for (const auto &v : e->values) out.push_back(to_number(v, e->line));
        return out;
    }
    void reject_unknown() const {
        for (const auto &e : section_.entries)
            if (!consumed_.count(e.key))
                throw ParseError("unknown key '" + e.key + "' in section [" + section_.name + "]",
                                 e.line);
    }

    const Section &section() const { return section_; }

  private:
    const Section &section_;
    std::set<std::string> consumed_;
};

void require_schema(SectionReader &top) {
    double schema = top.number("schema");
    if (schema != 1.0) throw ParseError("unsupported schema " + std::to_string(schema), 1);
}

Vec3 vec3_of(const std::vector<double> &v, std::size_t at = 0) {
    return {v[at], v[at + 1], v[at + 2]};
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

} // namespace

Scene parse_scene_text(const std::string &text) {
    auto sections = tokenize(text);
    Scene scene;
    bool saw_tx = false, saw_rx = false;

    SectionReader top(sections[0]);
    require_schema(top);
    scene.duration_s = top.number("duration");
    scene.phase_seed = static_cast<std::uint64_t>(top.number("phase_seed", 0.0));
    top.reject_unknown();

    for (std::size_t i = 1; i < sections.size(); ++i) {
        SectionReader sec(sections[i]);
        const std::string &name = sections[i].name;
        if (name == "tx" || name == "rx") {
            Pose pose;
            auto p = sec.numbers("position", 3);
            pose.position = vec3_of(p);
            pose.boresight_az_deg = wrap_deg(sec.number("boresight_az"));
            sec.reject_unknown();
            (name == "tx" ? scene.tx : scene.rx) = pose;
            (name == "tx" ? saw_tx : saw_rx) = true;
        } else if (name == "materials") {
            scene.materials.metal_db = sec.number("metal", scene.materials.metal_db);
            scene.materials.glass_db = sec.number("glass", scene.materials.glass_db);
            scene.materials.body_db = sec.number("body", scene.materials.body_db);
            sec.reject_unknown();
        } else if (name == "facet") {
            ReflectorFacet f;
            f.name = sec.word("name", std::string("facet_") + std::to_string(scene.facets.size()));
            auto v = sec.numbers("vertices", 12);
            for (int k = 0; k < 4; ++k) f.vertices[static_cast<std::size_t>(k)] = vec3_of(v, 3 * k);
            f.reflection_loss_db = sec.number("reflection_loss");
            sec.reject_unknown();
            scene.facets.push_back(f);
        } else if (name == "mover") {
            Mover m;
            m.id = sec.word("id");
            m.length_m = sec.number("length");
            m.width_m = sec.number("width");
            m.height_m = sec.number("height");
            m.reflection_loss_db = sec.number("reflection_loss", 6.0);
            // spans: alternating fraction, material name
            if (const Entry *e = sec.find("spans")) {
                if (!e->is_array || e->values.size() % 2 != 0)
                    throw ParseError("'spans' must be [fraction, material, ...] pairs", e->line);
                m.spans.clear();
                for (std::size_t k = 0; k < e->values.size(); k += 2) {
                    MaterialSpan s;
                    s.fraction = to_number(e->values[k], e->line);
                    try {
                        s.material = material_from_string(e->values[k + 1]);
                    } catch (const std::exception &ex) {
                        throw ParseError(ex.what(), e->line);
                    }
                    m.spans.push_back(s);
                }
            }
            m.waypoints.clear();
            for (const auto &e : sec.section().entries) {
                if (e.key != "waypoint") continue;
                if (!e.is_array || e.values.size() != 4)
                    throw ParseError("'waypoint' expects [t, x, y, z]", e.line);
                Waypoint w;
                w.time_s = to_number(e.values[0], e.line);
                w.position = {to_number(e.values[1], e.line), to_number(e.values[2], e.line),
                              to_number(e.values[3], e.line)};
                m.waypoints.push_back(w);
            }
            sec.find("waypoint"); // consumed above
            sec.reject_unknown();
            scene.movers.push_back(m);
        } else {
            throw ParseError("unknown section [" + name + "]", sections[i].line);
        }
    }
    if (!saw_tx || !saw_rx) throw ParseError("scene needs [tx] and [rx] sections", 1);
    scene.validate();
    return scene;
}

Scene load_scene_file(const std::string &path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open scene file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_scene_text(ss.str());
}

std::string scene_to_text(const Scene &scene) {
    std::ostringstream os;
    os << "# ddcs scene\nschema = 1\n";
    os << "duration = " << fmt(scene.duration_s) << "\n";
    os << "phase_seed = " << scene.phase_seed << "\n";
    auto pose = [&](const char *n, const Pose &p) {
        os << "\n[" << n << "]\nposition = [" << fmt(p.position.x) << ", " << fmt(p.position.y)
           << ", " << fmt(p.position.z) << "]\nboresight_az = " << fmt(p.boresight_az_deg) << "\n";
    };
    pose("tx", scene.tx);
    pose("rx", scene.rx);
    os << "\n[materials]\nmetal = " << fmt(scene.materials.metal_db)
       << "\nglass = " << fmt(scene.materials.glass_db)
       << "\nbody = " << fmt(scene.materials.body_db) << "\n";
    for (const auto &f : scene.facets) {
        os << "\n[facet]\nname = " << f.name << "\nvertices = [";
        for (int k = 0; k < 4; ++k) {
            const Vec3 &v = f.vertices[static_cast<std::size_t>(k)];
            os << fmt(v.x) << ", " << fmt(v.y) << ", " << fmt(v.z) << (k < 3 ? ", " : "");
        }
        os << "]\nreflection_loss = " << fmt(f.reflection_loss_db) << "\n";
    }
    for (const auto &m : scene.movers) {
        os << "\n[mover]\nid = " << m.id << "\nlength = " << fmt(m.length_m)
           << "\nwidth = " << fmt(m.width_m) << "\nheight = " << fmt(m.height_m)
           << "\nreflection_loss = " << fmt(m.reflection_loss_db) << "\nspans = [";
        for (std::size_t k = 0; k < m.spans.size(); ++k)
            os << fmt(m.spans[k].fraction) << ", " << to_string(m.spans[k].material)
               << (k + 1 < m.spans.size() ? ", " : "");
        os << "]\n";
        for (const auto &w : m.waypoints)
            os << "waypoint = [" << fmt(w.time_s) << ", " << fmt(w.position.x) << ", "
               << fmt(w.position.y) << ", " << fmt(w.position.z) << "]\n";
    }
    return os.str();
}

SounderConfig parse_sounder_text(const std::string &text) {
    auto sections = tokenize(text);
    SounderConfig c;

    SectionReader top(sections[0]);
    require_schema(top);
    c.seed = static_cast<std::uint64_t>(top.number("seed", 1.0));
    top.reject_unknown();

    for (std::size_t i = 1; i < sections.size(); ++i) {
        SectionReader sec(sections[i]);
        const std::string &name = sections[i].name;
        if (name == "waveform") {
            c.waveform.tone_count = static_cast<int>(sec.number("tone_count", 801.0));
            c.waveform.tone_spacing_hz = sec.number("tone_spacing", 500e3);
            c.waveform.center_frequency_hz = sec.number("center_frequency", 27.85e9);
            sec.reject_unknown();
        } else if (name == "timing") {
            c.slot_duration_s = sec.number("slot_duration", 4e-6);
            c.snapshots_per_burst = static_cast<int>(sec.number("snapshots_per_burst", 20.0));
            c.burst_period_s = sec.number("burst_period", 60e-3);
            c.burst_count = static_cast<int>(sec.number("burst_count", 200.0));
            sec.reject_unknown();
        } else if (name == "link") {
            c.tx_eirp_dbm = sec.number("tx_eirp_dbm", 36.0);
            c.max_tx_eirp_dbm = sec.number("max_tx_eirp_dbm", 57.0);
            c.rx_noise_figure_db = sec.number("rx_noise_figure_db", 5.0);
            c.bandwidth_hz = sec.number("bandwidth", 400e6);
            sec.reject_unknown();
        } else if (name == "beams") {
            if (sec.has("tx_azimuths")) c.tx_grid.azimuths_deg = sec.numbers("tx_azimuths");
            else sec.find("tx_azimuths");
            if (sec.has("rx_azimuths")) c.rx_grid.azimuths_deg = sec.numbers("rx_azimuths");
            else sec.find("rx_azimuths");
            c.boresight_gain_dbi = sec.number("boresight_gain_dbi", 19.5);
            c.beamwidth_az_deg = sec.number("beamwidth_az", 12.0);
            c.beamwidth_el_deg = sec.number("beamwidth_el", 22.0);
            c.sidelobe_floor_db = sec.number("sidelobe_floor_db", -20.0);
            sec.reject_unknown();
        } else if (name == "impairments") {
            std::string noise = sec.word("noise", std::string("on"));
            if (noise != "on" && noise != "off")
                throw ParseError("'noise' must be on or off", sections[i].line);
            c.noise_enabled = noise == "on";
            std::string cal = sec.word("calibration", std::string("ripple"));
            if (cal != "ripple" && cal != "identity")
                throw ParseError("'calibration' must be ripple or identity", sections[i].line);
            c.identity_calibration = cal == "identity";
            sec.reject_unknown();
        } else {
            throw ParseError("unknown section [" + name + "]", sections[i].line);
        }
    }
    c.validate();
    return c;
}

SounderConfig load_sounder_file(const std::string &path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open sounder config '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_sounder_text(ss.str());
}

std::string sounder_to_text(const SounderConfig &c) {
    std::ostringstream os;
    os << "# ddcs sounder configuration\nschema = 1\nseed = " << c.seed << "\n";
    os << "\n[waveform]\ntone_count = " << c.waveform.tone_count
       << "\ntone_spacing = " << fmt(c.waveform.tone_spacing_hz)
       << "\ncenter_frequency = " << fmt(c.waveform.center_frequency_hz) << "\n";
    os << "\n[timing]\nslot_duration = " << fmt(c.slot_duration_s)
       << "\nsnapshots_per_burst = " << c.snapshots_per_burst
       << "\nburst_period = " << fmt(c.burst_period_s) << "\nburst_count = " << c.burst_count
       << "\n";
    os << "\n[link]\ntx_eirp_dbm = " << fmt(c.tx_eirp_dbm)
       << "\nmax_tx_eirp_dbm = " << fmt(c.max_tx_eirp_dbm)
       << "\nrx_noise_figure_db = " << fmt(c.rx_noise_figure_db)
       << "\nbandwidth = " << fmt(c.bandwidth_hz) << "\n";
    os << "\n[beams]\ntx_azimuths = [";
    for (std::size_t i = 0; i < c.tx_grid.azimuths_deg.size(); ++i)
        os << fmt(c.tx_grid.azimuths_deg[i]) << (i + 1 < c.tx_grid.azimuths_deg.size() ? ", " : "");
    os << "]\nrx_azimuths = [";
    for (std::size_t i = 0; i < c.rx_grid.azimuths_deg.size(); ++i)
        os << fmt(c.rx_grid.azimuths_deg[i]) << (i + 1 < c.rx_grid.azimuths_deg.size() ? ", " : "");
    os << "]\nboresight_gain_dbi = " << fmt(c.boresight_gain_dbi)
       << "\nbeamwidth_az = " << fmt(c.beamwidth_az_deg)
       << "\nbeamwidth_el = " << fmt(c.beamwidth_el_deg)
       << "\nsidelobe_floor_db = " << fmt(c.sidelobe_floor_db) << "\n";
    os << "\n[impairments]\nnoise = " << (c.noise_enabled ? "on" : "off")
       << "\ncalibration = " << (c.identity_calibration ? "identity" : "ripple") << "\n";
    return os.str();
}

} // namespace ddcs
