#pragma once

#include <string>
#include <vector>

#include "quadsurf/fields.hpp"
#include "quadsurf/measures.hpp"

namespace quadsurf::io {

// All floating-point text output goes through this formatter (9 significant
// digits) so repeated runs produce byte-identical files.
std::string format_number(double v);
std::string format_number(int v);

// Minimal ordered JSON emitter; key order is the emission order.
class JsonWriter {
public:
    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array();
    JsonWriter& end_array();
    JsonWriter& key(const std::string& k);
    JsonWriter& number(double v);
    JsonWriter& number(int v);
    JsonWriter& string(const std::string& s);
    JsonWriter& boolean(bool b);
    JsonWriter& raw(const std::string& s);
    std::string str() const { return out_; }

private:
    void separator();
    std::string out_;
    std::vector<bool> first_in_scope_;
    bool pending_key_ = false;
};

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// Flat binary layout: float64, little endian, row major (row j contiguous,
// i fastest), described by a JSON sidecar manifest next to the data file.
void save_field(const std::string& dir, const std::string& name, const fields::ScalarField& f);
fields::ScalarField load_field(const std::string& dir, const std::string& name);
void save_mask(const std::string& dir, const std::string& name, const fields::DomainMask& m);
fields::DomainMask load_mask(const std::string& dir, const std::string& name);

std::string contour_csv(const std::vector<fields::LevelContour>& contours);
std::string contour_svg(const std::vector<fields::LevelContour>& contours,
                        const std::vector<std::vector<Vec2>>& overlay_points);

// Guards an output directory against concurrent writers. The lock file is
// created exclusively on construction and removed on destruction.
class DirLock {
public:
    explicit DirLock(const std::string& dir);
    ~DirLock();
    DirLock(const DirLock&) = delete;
    DirLock& operator=(const DirLock&) = delete;

private:
    std::string path_;
};

} // namespace quadsurf::io
