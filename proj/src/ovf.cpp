#include "cavimag/ovf.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

#include "cavimag/error.hpp"

namespace cavimag::ovf {

namespace {

constexpr float kCheck4 = 1234567.0f;
constexpr double kCheck8 = 123456789012345.0;
// Refuse to allocate beyond this many nodes; anything larger is a corrupt header here.
constexpr std::uint64_t kMaxNodes = std::uint64_t{1} << 31;

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::optional<double> parse_double(std::string_view s) {
    s = trim(s);
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::string format_shortest(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string format_17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <class T>
void put_le(std::string& out, T value) {
    using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
    const U bits = std::bit_cast<U>(value);
    for (std::size_t b = 0; b < sizeof(T); ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xFF));
}

template <class T>
T get_le(std::string_view bytes, std::size_t offset) {
    using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
    U bits = 0;
    for (std::size_t b = 0; b < sizeof(T); ++b)
        bits |= static_cast<U>(static_cast<unsigned char>(bytes[offset + b])) << (8 * b);
    return std::bit_cast<T>(bits);
}

class Cursor {
public:
    explicit Cursor(std::string_view bytes) : bytes_(bytes) {}

    bool done() const { return pos_ >= bytes_.size(); }
    std::size_t pos() const { return pos_; }
    void seek(std::size_t p) { pos_ = std::min(p, bytes_.size()); }

    /// Next line without its terminator (handles LF and CRLF).
    std::string_view line() {
        const std::size_t start = pos_;
        const std::size_t nl = bytes_.find('\n', pos_);
        std::size_t end = nl == std::string_view::npos ? bytes_.size() : nl;
        pos_ = nl == std::string_view::npos ? bytes_.size() : nl + 1;
        if (end > start && bytes_[end - 1] == '\r') --end;
        return bytes_.substr(start, end - start);
    }

private:
    std::string_view bytes_;
    std::size_t pos_ = 0;
};

struct HeaderLine {
    std::string key;  // lower-case
    std::string_view value;
};

/// "# key: value" -> (key, value). Returns nullopt for comments or non-header lines.
std::optional<HeaderLine> split_header(std::string_view line) {
    if (line.size() < 1 || line.front() != '#') return std::nullopt;
    if (line.size() >= 2 && line[1] == '#') return std::nullopt;
    std::string_view body = trim(line.substr(1));
    const auto colon = body.find(':');
    if (colon == std::string_view::npos) return std::nullopt;
    return HeaderLine{lower(trim(body.substr(0, colon))), trim(body.substr(colon + 1))};
}

int parse_nodes(std::string_view v, const char* name, std::size_t offset) {
    const auto d = parse_double(v);
    if (!d || *d < 1 || *d != std::floor(*d) || *d > static_cast<double>(std::numeric_limits<int>::max()))
        throw OvfError(ErrorKind::MalformedHeader, offset, std::string("invalid ") + name + " '" + std::string(v) + "'");
    return static_cast<int>(*d);
}

double parse_number(std::string_view v, const char* name, std::size_t offset) {
    const auto d = parse_double(v);
    if (!d || !std::isfinite(*d))
        throw OvfError(ErrorKind::MalformedHeader, offset, std::string("invalid ") + name + " '" + std::string(v) + "'");
    return *d;
}

}  // namespace

std::string_view to_string(Representation r) {
    switch (r) {
        case Representation::text: return "Text";
        case Representation::binary4: return "Binary 4";
        case Representation::binary8: return "Binary 8";
    }
    return "?";
}

std::string_view to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::BadMagic: return "BadMagic";
        case ErrorKind::UnsupportedVersion: return "UnsupportedVersion";
        case ErrorKind::MalformedHeader: return "MalformedHeader";
        case ErrorKind::UnsupportedMesh: return "UnsupportedMesh";
        case ErrorKind::CheckValueMismatch: return "CheckValueMismatch";
        case ErrorKind::TruncatedPayload: return "TruncatedPayload";
        case ErrorKind::NodeCountMismatch: return "NodeCountMismatch";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::StepMismatch: return "StepMismatch";
    }
    return "?";
}

OvfError::OvfError(ErrorKind kind, std::size_t offset, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + " at byte " + std::to_string(offset) + ": " + what),
      kind_(kind),
      offset_(offset) {}

Document parse(std::string_view bytes) {
    Cursor cur(bytes);
    const std::string magic = lower(trim(cur.line()));
    if (magic.rfind("# oommf", 0) != 0) throw OvfError(ErrorKind::BadMagic, 0, "missing '# OOMMF OVF 2.0' signature");
    if (magic.find("ovf 2.0") == std::string::npos) {
        throw OvfError(ErrorKind::UnsupportedVersion, 0, "unsupported version '" + magic + "', only OVF 2.0 is read");
    }

    Document doc;
    bool have_meshtype = false, have_valuedim = false;
    bool have_x = false, have_y = false, have_z = false;
    bool have_dx = false, have_dy = false, have_dz = false;
    std::optional<Representation> rep;

    while (!cur.done()) {
        const std::size_t at = cur.pos();
        const std::string_view raw = cur.line();
        if (trim(raw).empty()) continue;
        const auto h = split_header(raw);
        if (!h) {
            if (raw.front() == '#') continue;  // '##' comment or a bare marker
            throw OvfError(ErrorKind::MalformedHeader, at, "unexpected line before data block");
        }
        const std::string& key = h->key;
        const std::string_view v = h->value;
        if (key == "begin") {
            const std::string what = lower(v);
            if (what.rfind("data", 0) == 0) {
                const std::string fmt = lower(trim(std::string_view(what).substr(4)));
                if (fmt == "text") rep = Representation::text;
                else if (fmt == "binary 4") rep = Representation::binary4;
                else if (fmt == "binary 8") rep = Representation::binary8;
                else throw OvfError(ErrorKind::MalformedHeader, at, "unknown data format '" + std::string(v) + "'");
                break;
            }
            continue;
        }
        if (key == "end" || key == "segment count") continue;
        if (key == "title") doc.title = std::string(v);
        else if (key == "desc") doc.desc.emplace_back(v);
        else if (key == "meshunit") doc.meshunit = std::string(v);
        else if (key == "valuelabels") doc.valuelabels = std::string(v);
        else if (key == "valueunits") doc.valueunits = std::string(v);
        else if (key == "meshtype") {
            if (lower(v) != "rectangular")
                throw OvfError(ErrorKind::UnsupportedMesh, at, "meshtype '" + std::string(v) + "' is not rectangular");
            have_meshtype = true;
        } else if (key == "valuedim") {
            const auto d = parse_double(v);
            if (!d || *d != 3.0) throw OvfError(ErrorKind::UnsupportedMesh, at, "valuedim must be 3");
            have_valuedim = true;
        } else if (key == "xmin") doc.xmin = parse_number(v, "xmin", at);
        else if (key == "ymin") doc.ymin = parse_number(v, "ymin", at);
        else if (key == "zmin") doc.zmin = parse_number(v, "zmin", at);
        else if (key == "xmax") doc.xmax = parse_number(v, "xmax", at);
        else if (key == "ymax") doc.ymax = parse_number(v, "ymax", at);
        else if (key == "zmax") doc.zmax = parse_number(v, "zmax", at);
        else if (key == "xbase") doc.xbase = parse_number(v, "xbase", at);
        else if (key == "ybase") doc.ybase = parse_number(v, "ybase", at);
        else if (key == "zbase") doc.zbase = parse_number(v, "zbase", at);
        else if (key == "xnodes") doc.xnodes = parse_nodes(v, "xnodes", at), have_x = true;
        else if (key == "ynodes") doc.ynodes = parse_nodes(v, "ynodes", at), have_y = true;
        else if (key == "znodes") doc.znodes = parse_nodes(v, "znodes", at), have_z = true;
        else if (key == "xstepsize") doc.xstepsize = parse_number(v, "xstepsize", at), have_dx = true;
        else if (key == "ystepsize") doc.ystepsize = parse_number(v, "ystepsize", at), have_dy = true;
        else if (key == "zstepsize") doc.zstepsize = parse_number(v, "zstepsize", at), have_dz = true;
        // other keys are legal OVF metadata we do not use
    }

    const std::size_t data_at = cur.pos();
    if (!rep) throw OvfError(ErrorKind::MalformedHeader, data_at, "no '# Begin: Data' block");
    if (!have_meshtype) throw OvfError(ErrorKind::MalformedHeader, data_at, "missing meshtype");
    if (!have_valuedim) throw OvfError(ErrorKind::MalformedHeader, data_at, "missing valuedim");
    if (!(have_x && have_y && have_z)) throw OvfError(ErrorKind::MalformedHeader, data_at, "missing node counts");
    if (!(have_dx && have_dy && have_dz)) throw OvfError(ErrorKind::MalformedHeader, data_at, "missing step sizes");
    doc.representation = *rep;

    const std::uint64_t nodes = static_cast<std::uint64_t>(doc.xnodes) * static_cast<std::uint64_t>(doc.ynodes) *
                                static_cast<std::uint64_t>(doc.znodes);
    if (nodes > kMaxNodes) throw OvfError(ErrorKind::MalformedHeader, data_at, "node count too large");
    const std::size_t count = static_cast<std::size_t>(nodes) * 3;

    if (*rep == Representation::text) {
        std::vector<double> numbers;
        // each value needs at least two bytes; never trust the header for the allocation
        numbers.reserve(std::min<std::size_t>(count, (bytes.size() - cur.pos()) / 2 + 1));
        bool closed = false;
        while (!cur.done()) {
            const std::size_t at = cur.pos();
            const std::string_view raw = cur.line();
            const std::string_view t = trim(raw);
            if (t.empty()) continue;
            if (t.front() == '#') {
                const auto h = split_header(t);
                if (h && h->key == "end" && lower(h->value).rfind("data", 0) == 0) {
                    closed = true;
                    break;
                }
                continue;
            }
            std::size_t i = 0;
            while (i < t.size()) {
                while (i < t.size() && std::isspace(static_cast<unsigned char>(t[i]))) ++i;
                std::size_t j = i;
                while (j < t.size() && !std::isspace(static_cast<unsigned char>(t[j]))) ++j;
                if (j > i) {
                    const auto d = parse_double(t.substr(i, j - i));
                    if (!d)
                        throw OvfError(ErrorKind::MalformedHeader, at + static_cast<std::size_t>(raw.find(t)) + i,
                                       "bad number '" + std::string(t.substr(i, j - i)) + "'");
                    if (numbers.size() >= count)
                        throw OvfError(ErrorKind::NodeCountMismatch, at, "more values than the header's node count");
                    numbers.push_back(*d);
                }
                i = j;
            }
        }
        if (numbers.size() != count)
            throw OvfError(ErrorKind::NodeCountMismatch, cur.pos(),
                           "expected " + std::to_string(count) + " values, found " + std::to_string(numbers.size()));
        if (!closed) throw OvfError(ErrorKind::TruncatedPayload, cur.pos(), "missing '# End: Data Text'");
        doc.values.resize(nodes);
        for (std::size_t n = 0; n < nodes; ++n) doc.values[n] = {numbers[3 * n], numbers[3 * n + 1], numbers[3 * n + 2]};
        return doc;
    }

    const std::size_t width = *rep == Representation::binary4 ? 4 : 8;
    std::size_t off = data_at;
    if (bytes.size() < off + width)
        throw OvfError(ErrorKind::TruncatedPayload, off, "payload ends before the check value");
    if (width == 4) {
        const float check = get_le<float>(bytes, off);
        if (check != kCheck4)
            throw OvfError(ErrorKind::CheckValueMismatch, off, "binary 4 check value is " + format_17(check));
    } else {
        const double check = get_le<double>(bytes, off);
        if (check != kCheck8)
            throw OvfError(ErrorKind::CheckValueMismatch, off, "binary 8 check value is " + format_17(check));
    }
    off += width;
    if ((bytes.size() - off) / width < count)
        throw OvfError(ErrorKind::TruncatedPayload, bytes.size(),
                       "payload holds " + std::to_string((bytes.size() - off) / width) + " values, header declares " +
                           std::to_string(count));
    doc.values.resize(nodes);
    for (std::size_t n = 0; n < nodes; ++n) {
        double v[3];
        for (int c = 0; c < 3; ++c) {
            v[c] = width == 4 ? static_cast<double>(get_le<float>(bytes, off)) : get_le<double>(bytes, off);
            off += width;
        }
        doc.values[n] = {v[0], v[1], v[2]};
    }
    cur.seek(off);
    bool closed = false;
    while (!cur.done()) {
        const std::string_view t = trim(cur.line());
        if (t.empty()) continue;
        const auto h = split_header(t);
        if (h && h->key == "end" && lower(h->value).rfind("data", 0) == 0) {
            closed = true;
            break;
        }
        throw OvfError(ErrorKind::NodeCountMismatch, off, "unexpected bytes after the declared payload");
    }
    if (!closed) throw OvfError(ErrorKind::TruncatedPayload, off, "missing '# End: Data' marker");
    return doc;
}

std::string write(const Document& doc, Representation representation) {
    if (doc.values.size() != doc.node_count())
        throw ConfigError("ovf write: " + std::to_string(doc.values.size()) + " values for " +
                          std::to_string(doc.node_count()) + " nodes");
    std::string out;
    out.reserve(1024 + doc.values.size() * 3 * 25);
    auto hdr = [&](std::string_view key, std::string_view value) {
        out += "# ";
        out += key;
        out += ": ";
        out += value;
        out += '\n';
    };
    auto num = [&](std::string_view key, double v) { hdr(key, format_shortest(v)); };

    out += "# OOMMF OVF 2.0\n";
    hdr("Segment count", "1");
    hdr("Begin", "Segment");
    hdr("Begin", "Header");
    hdr("Title", doc.title);
    hdr("meshtype", "rectangular");
    hdr("meshunit", doc.meshunit);
    num("xmin", doc.xmin);
    num("ymin", doc.ymin);
    num("zmin", doc.zmin);
    num("xmax", doc.xmax);
    num("ymax", doc.ymax);
    num("zmax", doc.zmax);
    hdr("valuedim", "3");
    hdr("valuelabels", doc.valuelabels);
    hdr("valueunits", doc.valueunits);
    for (const auto& d : doc.desc) hdr("Desc", d);
    num("xbase", doc.xbase);
    num("ybase", doc.ybase);
    num("zbase", doc.zbase);
    hdr("xnodes", std::to_string(doc.xnodes));
    hdr("ynodes", std::to_string(doc.ynodes));
    hdr("znodes", std::to_string(doc.znodes));
    num("xstepsize", doc.xstepsize);
    num("ystepsize", doc.ystepsize);
    num("zstepsize", doc.zstepsize);
    hdr("End", "Header");
    const std::string fmt(to_string(representation));
    hdr("Begin", "Data " + fmt);
    switch (representation) {
        case Representation::text:
            for (const Vec3& v : doc.values) {
                out += format_17(v.x);
                out += ' ';
                out += format_17(v.y);
                out += ' ';
                out += format_17(v.z);
                out += '\n';
            }
            break;
        case Representation::binary4:
            put_le(out, kCheck4);
            for (const Vec3& v : doc.values) {
                put_le(out, static_cast<float>(v.x));
                put_le(out, static_cast<float>(v.y));
                put_le(out, static_cast<float>(v.z));
            }
            out += '\n';
            break;
        case Representation::binary8:
            put_le(out, kCheck8);
            for (const Vec3& v : doc.values) {
                put_le(out, v.x);
                put_le(out, v.y);
                put_le(out, v.z);
            }
            out += '\n';
            break;
    }
    hdr("End", "Data " + fmt);
    hdr("End", "Segment");
    return out;
}

Document read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open OVF file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

void write_file(const std::string& path, const Document& doc, Representation representation) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write OVF file '" + path + "'");
    const std::string bytes = write(doc, representation);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

Document from_field(const FieldMap& values, const Mesh& mesh, std::string title, std::string labels,
                    std::string units) {
    if (values.size() != mesh.cell_count()) throw ConfigError("ovf: field does not match the mesh");
    Document doc;
    doc.title = std::move(title);
    doc.valuelabels = std::move(labels);
    doc.valueunits = std::move(units);
    doc.xnodes = mesh.nx();
    doc.ynodes = mesh.ny();
    doc.znodes = mesh.nz();
    doc.xstepsize = mesh.dx();
    doc.ystepsize = mesh.dy();
    doc.zstepsize = mesh.dz();
    doc.xmax = mesh.nx() * mesh.dx();
    doc.ymax = mesh.ny() * mesh.dy();
    doc.zmax = mesh.nz() * mesh.dz();
    doc.xbase = 0.5 * mesh.dx();
    doc.ybase = 0.5 * mesh.dy();
    doc.zbase = 0.5 * mesh.dz();
    doc.values = values;
    return doc;
}

FieldMap map_to_mesh(const Document& doc, const Mesh& mesh, double rel_tolerance) {
    auto shape = [](int x, int y, int z) {
        return std::to_string(x) + "x" + std::to_string(y) + "x" + std::to_string(z);
    };
    if (doc.xnodes != mesh.nx() || doc.ynodes != mesh.ny() || doc.znodes != mesh.nz())
        throw OvfError(ErrorKind::DimensionMismatch, 0,
                       "file grid " + shape(doc.xnodes, doc.ynodes, doc.znodes) + " vs mesh " +
                           shape(mesh.nx(), mesh.ny(), mesh.nz()));
    auto close = [&](double a, double b) { return std::abs(a - b) <= rel_tolerance * std::max(std::abs(a), std::abs(b)); };
    if (!close(doc.xstepsize, mesh.dx()) || !close(doc.ystepsize, mesh.dy()) || !close(doc.zstepsize, mesh.dz()))
        throw OvfError(ErrorKind::StepMismatch, 0,
                       "file cell " + format_shortest(doc.xstepsize) + "," + format_shortest(doc.ystepsize) + "," +
                           format_shortest(doc.zstepsize) + " vs mesh " + format_shortest(mesh.dx()) + "," +
                           format_shortest(mesh.dy()) + "," + format_shortest(mesh.dz()));
    if (doc.values.size() != mesh.cell_count())
        throw OvfError(ErrorKind::NodeCountMismatch, 0, "document payload does not match its node count");
    return doc.values;
}

}  // namespace cavimag::ovf
