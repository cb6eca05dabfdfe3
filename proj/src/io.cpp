#include "quadsurf/io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "quadsurf/error.hpp"

namespace quadsurf::io {

namespace fs = std::filesystem;

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string format_number(int v) {
    return std::to_string(v);
}

// --- JsonWriter ---------------------------------------------------------------

void JsonWriter::separator() {
    if (pending_key_) {
        pending_key_ = false;
        return;
    }
    if (!first_in_scope_.empty()) {
        if (!first_in_scope_.back()) out_ += ',';
        first_in_scope_.back() = false;
    }
}

JsonWriter& JsonWriter::begin_object() {
    separator();
    out_ += '{';
    first_in_scope_.push_back(true);
    return *this;
}

JsonWriter& JsonWriter::end_object() {
    out_ += '}';
    first_in_scope_.pop_back();
    return *this;
}

JsonWriter& JsonWriter::begin_array() {
    separator();
    out_ += '[';
    first_in_scope_.push_back(true);
    return *this;
}

JsonWriter& JsonWriter::end_array() {
    out_ += ']';
    first_in_scope_.pop_back();
    return *this;
}

JsonWriter& JsonWriter::key(const std::string& k) {
    separator();
    out_ += '"';
    out_ += k;
    out_ += "\":";
    pending_key_ = true;
    return *this;
}

JsonWriter& JsonWriter::number(double v) {
    separator();
    out_ += format_number(v);
    return *this;
}

JsonWriter& JsonWriter::number(int v) {
    separator();
    out_ += std::to_string(v);
    return *this;
}

JsonWriter& JsonWriter::string(const std::string& s) {
    separator();
    out_ += '"';
    for (char c : s) {
        switch (c) {
            case '"': out_ += "\\\""; break;
            case '\\': out_ += "\\\\"; break;
            case '\n': out_ += "\\n"; break;
            case '\t': out_ += "\\t"; break;
            default: out_ += c;
        }
    }
    out_ += '"';
    return *this;
}

JsonWriter& JsonWriter::boolean(bool b) {
    separator();
    out_ += b ? "true" : "false";
    return *this;
}

JsonWriter& JsonWriter::raw(const std::string& s) {
    separator();
    out_ += s;
    return *this;
}

// --- files ---------------------------------------------------------------------

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::io_failure, "cannot open for writing: " + path);
    out << content;
    if (!out) throw Error(Errc::io_failure, "write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::io_failure, "cannot open: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

static_assert(std::endian::native == std::endian::little,
              "field persistence assumes a little endian host");

void write_grid_manifest(JsonWriter& w, const fields::Grid& g, const char* kind,
                         const std::string& data_file) {
    w.begin_object();
    w.key("kind").string(kind);
    w.key("data_file").string(data_file);
    w.key("dtype").string("float64");
    w.key("endianness").string("little");
    w.key("order").string("row-major");
    w.key("nx").number(g.nx);
    w.key("ny").number(g.ny);
    w.key("h").number(g.h);
    w.key("origin").begin_array().number(g.origin.x).number(g.origin.y).end_array();
    w.end_object();
}

void save_values(const std::string& dir, const std::string& name, const char* kind,
                 const fields::Grid& g, const std::vector<double>& values) {
    fs::create_directories(dir);
    std::string bin = name + ".bin";
    std::ofstream out(fs::path(dir) / bin, std::ios::binary);
    if (!out) throw Error(Errc::io_failure, "cannot open for writing: " + dir + "/" + bin);
    out.write(reinterpret_cast<const char*>(values.data()),
              (std::streamsize)(values.size() * sizeof(double)));
    if (!out) throw Error(Errc::io_failure, "write failed: " + dir + "/" + bin);
    JsonWriter w;
    write_grid_manifest(w, g, kind, bin);
    write_text_file((fs::path(dir) / (name + ".json")).string(), w.str() + "\n");
}

std::pair<fields::Grid, std::vector<double>> load_values(const std::string& dir,
                                                         const std::string& name,
                                                         const char* kind) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text_file((fs::path(dir) / (name + ".json")).string()));
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::io_failure, std::string("manifest parse: ") + e.what());
    }
    if (j.value("kind", "") != kind || j.value("dtype", "") != "float64" ||
        j.value("endianness", "") != "little" || j.value("order", "") != "row-major")
        throw Error(Errc::io_failure, "manifest does not describe a supported layout");
    fields::Grid g;
    g.nx = j["nx"].get<int>();
    g.ny = j["ny"].get<int>();
    g.h = j["h"].get<double>();
    g.origin = {j["origin"][0].get<double>(), j["origin"][1].get<double>()};
    fields::validate_grid(g);

    std::ifstream in(fs::path(dir) / j["data_file"].get<std::string>(), std::ios::binary);
    if (!in) throw Error(Errc::io_failure, "cannot open data file for " + name);
    std::vector<double> values((size_t)g.node_count());
    in.read(reinterpret_cast<char*>(values.data()),
            (std::streamsize)(values.size() * sizeof(double)));
    if (in.gcount() != (std::streamsize)(values.size() * sizeof(double)))
        throw Error(Errc::io_failure, "data file truncated for " + name);
    return {g, std::move(values)};
}

} // namespace

void save_field(const std::string& dir, const std::string& name, const fields::ScalarField& f) {
    save_values(dir, name, "field", f.grid, f.values);
}

fields::ScalarField load_field(const std::string& dir, const std::string& name) {
    auto [g, values] = load_values(dir, name, "field");
    fields::ScalarField f;
    f.grid = g;
    f.values = std::move(values);
    return f;
}

void save_mask(const std::string& dir, const std::string& name, const fields::DomainMask& m) {
    save_values(dir, name, "mask", m.grid, m.phi);
}

fields::DomainMask load_mask(const std::string& dir, const std::string& name) {
    auto [g, values] = load_values(dir, name, "mask");
    fields::DomainMask m;
    m.grid = g;
    m.phi = std::move(values);
    return m;
}

// --- contour exports ------------------------------------------------------------

std::string contour_csv(const std::vector<fields::LevelContour>& contours) {
    std::string out = "level,component_id,vertex_id,x,y\n";
    for (const auto& c : contours) {
        for (size_t comp = 0; comp < c.components.size(); ++comp) {
            const auto& pts = c.components[comp];
            for (size_t v = 0; v < pts.size(); ++v) {
                out += format_number(c.level) + "," + std::to_string(comp) + "," +
                       std::to_string(v) + "," + format_number(pts[v].x) + "," +
                       format_number(pts[v].y) + "\n";
            }
        }
    }
    return out;
}

std::string contour_svg(const std::vector<fields::LevelContour>& contours,
                        const std::vector<std::vector<Vec2>>& overlay_points) {
    double lo = 1e30, hi = -1e30;
    auto grow = [&](Vec2 p) {
        lo = std::min({lo, p.x, p.y});
        hi = std::max({hi, p.x, p.y});
    };
    for (const auto& c : contours)
        for (const auto& comp : c.components)
            for (Vec2 p : comp) grow(p);
    for (const auto& ov : overlay_points)
        for (Vec2 p : ov) grow(p);
    if (lo > hi) { lo = -1.0; hi = 1.0; }
    double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" + format_number(lo) + " " +
           format_number(lo) + " " + format_number(hi - lo) + " " + format_number(hi - lo) +
           "\">\n";
    out += "<g transform=\"scale(1,-1) translate(0," + format_number(-(hi + lo)) + ")\">\n";
    const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    int color = 0;
    for (const auto& c : contours) {
        for (size_t comp = 0; comp < c.components.size(); ++comp) {
            const auto& pts = c.components[comp];
            if (pts.empty()) continue;
            std::string d = "M";
            for (size_t v = 0; v < pts.size(); ++v) {
                d += format_number(pts[v].x) + " " + format_number(pts[v].y);
                if (v + 1 < pts.size()) d += " L";
            }
            if (c.closed[comp]) d += " Z";
            out += "<path data-level=\"" + format_number(c.level) + "\" d=\"" + d +
                   "\" fill=\"none\" stroke=\"" + palette[color % 6] +
                   "\" stroke-width=\"" + format_number(0.004 * (hi - lo)) + "\"/>\n";
        }
        ++color;
    }
    for (const auto& ov : overlay_points) {
        for (Vec2 p : ov) {
            out += "<circle cx=\"" + format_number(p.x) + "\" cy=\"" + format_number(p.y) +
                   "\" r=\"" + format_number(0.003 * (hi - lo)) + "\" fill=\"#333333\"/>\n";
        }
    }
    out += "</g>\n</svg>\n";
    return out;
}

// --- directory lock --------------------------------------------------------------

DirLock::DirLock(const std::string& dir) {
    fs::create_directories(dir);
    path_ = (fs::path(dir) / ".quadsurf.lock").string();
    FILE* f = std::fopen(path_.c_str(), "wx");
    if (!f)
        throw Error(Errc::io_failure, "output directory is locked by another run: " + dir);
    std::fclose(f);
}

DirLock::~DirLock() {
    std::remove(path_.c_str());
}

} // namespace quadsurf::io
