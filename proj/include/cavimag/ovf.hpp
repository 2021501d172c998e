#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cavimag/mesh.hpp"
#include "cavimag/vec3.hpp"

namespace cavimag::ovf {

enum class Representation { text, binary4, binary8 };

std::string_view to_string(Representation r);

enum class ErrorKind {
    BadMagic,
    UnsupportedVersion,
    MalformedHeader,
    UnsupportedMesh,
    CheckValueMismatch,
    TruncatedPayload,
    NodeCountMismatch,
    DimensionMismatch,
    StepMismatch,
};

std::string_view to_string(ErrorKind k);

class OvfError : public std::runtime_error {
public:
    OvfError(ErrorKind kind, std::size_t offset, const std::string& what);
    ErrorKind kind() const { return kind_; }
    /// Byte offset into the input where the problem was found.
    std::size_t offset() const { return offset_; }

private:
    ErrorKind kind_;
    std::size_t offset_;
};

/// OVF 2.0 rectangular mesh with a 3-component value per node, x fastest.
struct Document {
    std::string title;
    std::string meshunit = "m";
    std::vector<std::string> desc;
    std::string valuelabels = "x y z";
    std::string valueunits = "1 1 1";
    double xmin = 0, ymin = 0, zmin = 0;
    double xmax = 0, ymax = 0, zmax = 0;
    double xbase = 0, ybase = 0, zbase = 0;
    int xnodes = 0, ynodes = 0, znodes = 0;
    double xstepsize = 0, ystepsize = 0, zstepsize = 0;
    Representation representation = Representation::binary8;
    std::vector<Vec3> values;

    std::size_t node_count() const {
        return static_cast<std::size_t>(xnodes) * static_cast<std::size_t>(ynodes) * static_cast<std::size_t>(znodes);
    }
};

Document parse(std::string_view bytes);

/// Canonical serialization: LF endings, fixed key order, little-endian binary,
/// 17 significant digits in text mode.
std::string write(const Document& doc, Representation representation);
inline std::string write(const Document& doc) { return write(doc, doc.representation); }

Document read_file(const std::string& path);
void write_file(const std::string& path, const Document& doc, Representation representation);

/// Document describing `values` on `mesh` (extent, base and step sizes filled in).
Document from_field(const FieldMap& values, const Mesh& mesh, std::string title, std::string labels = "x y z",
                    std::string units = "1 1 1");

/// Exact-grid copy onto the engine mesh. Node counts must match; step sizes
/// must agree within `rel_tolerance`.
FieldMap map_to_mesh(const Document& doc, const Mesh& mesh, double rel_tolerance = 1e-9);

}  // namespace cavimag::ovf
