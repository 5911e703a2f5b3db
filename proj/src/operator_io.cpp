#include "sbp/operator_io.hpp"

#include "sbp/error.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

namespace sbp {

namespace {

std::string fmt(double v)
{
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

class LineReader {
public:
    LineReader(std::istream& is, std::string source) : is_(is), source_(std::move(source)) {}

    // Next non-empty, non-comment line; empty optional at end of input.
    bool next(std::string& line)
    {
        while (std::getline(is_, line)) {
            ++lineno_;
            const auto a = line.find_first_not_of(" \t\r");
            if (a == std::string::npos || line[a] == '#')
                continue;
            const auto b = line.find_last_not_of(" \t\r");
            line = line.substr(a, b - a + 1);
            return true;
        }
        return false;
    }

    std::string expect(const std::string& field)
    {
        std::string line;
        if (!next(line))
            fail(field, "unexpected end of file");
        return line;
    }

    [[noreturn]] void fail(const std::string& field, const std::string& what) const
    {
        throw ParseError(source_ + ":" + std::to_string(lineno_) + ": field '" + field + "': " + what);
    }

    int lineno() const { return lineno_; }

private:
    std::istream& is_;
    std::string source_;
    int lineno_ = 0;
};

std::vector<std::string> split(const std::string& s)
{
    std::istringstream is(s);
    std::vector<std::string> out;
    std::string w;
    while (is >> w)
        out.push_back(w);
    return out;
}

double parse_real(const LineReader& r, const std::string& field, const std::string& tok)
{
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (tok.empty() || *end != '\0')
        r.fail(field, "not a real number: '" + tok + "'");
    return v;
}

int parse_int(const LineReader& r, const std::string& field, const std::string& tok)
{
    char* end = nullptr;
    const long v = std::strtol(tok.c_str(), &end, 10);
    if (tok.empty() || *end != '\0')
        r.fail(field, "not an integer: '" + tok + "'");
    return static_cast<int>(v);
}

std::vector<double> parse_reals(const LineReader& r, const std::string& field, const std::string& line,
                                size_t expected)
{
    const auto toks = split(line);
    if (expected != 0 && toks.size() != expected)
        r.fail(field, "expected " + std::to_string(expected) + " values, found " +
                          std::to_string(toks.size()));
    std::vector<double> v;
    for (const auto& t : toks)
        v.push_back(parse_real(r, field, t));
    return v;
}

std::pair<std::string, std::string> key_value(const LineReader& r, const std::string& line,
                                              const std::string& key)
{
    const auto sp = line.find_first_of(" \t");
    const std::string k = line.substr(0, sp);
    if (k != key)
        r.fail(key, "expected key '" + key + "', found '" + k + "'");
    if (sp == std::string::npos)
        r.fail(key, "missing value");
    const auto vs = line.find_first_not_of(" \t", sp);
    return {k, line.substr(vs)};
}

} // namespace

void write_operator(std::ostream& os, const OperatorPair& pair)
{
    const int s = pair.boundary_width;
    os << kOperatorFileHeader << "\n";
    os << "order " << pair.order << "\n";
    os << "boundary_width " << s << "\n";
    os << "d1 " << fmt(pair.d1) << "\n";
    os << "d2 " << fmt(pair.d2) << "\n";
    os << "provenance " << to_string(pair.provenance) << "\n";
    for (const auto& [k, v] : pair.metadata)
        os << "meta " << k << " " << v << "\n";
    os << "H_boundary:\n";
    for (double v : pair.h_boundary)
        os << fmt(v) << "\n";
    os << "Q_boundary:\n";
    for (int i = 0; i < s; ++i) {
        for (int j = 0; j < s; ++j)
            os << (j ? " " : "") << fmt(pair.q_block(i, j));
        os << "\n";
    }
    os << "Q_transition:\n" << pair.q_transition.size() << "\n";
    for (const auto& t : pair.q_transition) {
        os << t.row << " " << t.first_col;
        for (double v : t.coeffs)
            os << " " << fmt(v);
        os << "\n";
    }
    os << "interior:\n";
    for (size_t k = 0; k < pair.interior.coeffs.size(); ++k)
        os << (k ? " " : "") << pair.interior.first_offset + static_cast<int>(k);
    os << "\n";
    for (size_t k = 0; k < pair.interior.coeffs.size(); ++k)
        os << (k ? " " : "") << fmt(pair.interior.coeffs[k]);
    os << "\n";
}

OperatorPair read_operator(std::istream& is, const std::string& source)
{
    LineReader r(is, source);
    OperatorPair p;
    std::string line = r.expect("header");
    if (line != kOperatorFileHeader) {
        if (line.rfind("sbp-upwind-operator", 0) == 0)
            throw VersionError(source + ": unsupported version '" + line + "'");
        r.fail("header", "expected '" + std::string(kOperatorFileHeader) + "'");
    }
    p.order = parse_int(r, "order", key_value(r, r.expect("order"), "order").second);
    p.boundary_width =
        parse_int(r, "boundary_width", key_value(r, r.expect("boundary_width"), "boundary_width").second);
    p.d1 = parse_real(r, "d1", key_value(r, r.expect("d1"), "d1").second);
    p.d2 = parse_real(r, "d2", key_value(r, r.expect("d2"), "d2").second);
    const std::string prov = key_value(r, r.expect("provenance"), "provenance").second;
    if (prov == "derived")
        p.provenance = Provenance::derived;
    else if (prov == "imported")
        p.provenance = Provenance::imported;
    else
        r.fail("provenance", "expected derived or imported, found '" + prov + "'");
    if (p.order < 2 || p.order > 9)
        r.fail("order", "must be in 2..9");
    if (p.boundary_width < 1)
        r.fail("boundary_width", "must be positive");
    const size_t s = static_cast<size_t>(p.boundary_width);

    for (line = r.expect("H_boundary"); line.rfind("meta ", 0) == 0; line = r.expect("H_boundary")) {
        const auto toks = line.find_first_of(" \t", 5);
        if (toks == std::string::npos)
            r.fail("meta", "missing value");
        p.metadata.emplace_back(line.substr(5, toks - 5), line.substr(line.find_first_not_of(" \t", toks)));
    }
    if (line != "H_boundary:")
        r.fail("H_boundary", "expected section 'H_boundary:', found '" + line + "'");
    for (size_t i = 0; i < s; ++i) {
        line = r.expect("H_boundary");
        if (line == "Q_boundary:")
            r.fail("H_boundary", "expected " + std::to_string(s) + " entries, found " + std::to_string(i));
        p.h_boundary.push_back(parse_reals(r, "H_boundary", line, 1)[0]);
    }
    line = r.expect("Q_boundary");
    if (line != "Q_boundary:")
        r.fail("Q_boundary", "expected section 'Q_boundary:', found '" + line + "'");
    for (size_t i = 0; i < s; ++i) {
        line = r.expect("Q_boundary");
        if (line == "Q_transition:")
            r.fail("Q_boundary", "expected " + std::to_string(s) + " rows, found " + std::to_string(i));
        const auto row = parse_reals(r, "Q_boundary", line, s);
        p.q_boundary.insert(p.q_boundary.end(), row.begin(), row.end());
    }
    line = r.expect("Q_transition");
    if (line != "Q_transition:")
        r.fail("Q_transition", "expected section 'Q_transition:', found '" + line + "'");
    const int nt = parse_int(r, "Q_transition", r.expect("Q_transition"));
    if (nt < 0)
        r.fail("Q_transition", "negative row count");
    for (int k = 0; k < nt; ++k) {
        const auto toks = split(r.expect("Q_transition"));
        if (toks.size() < 3)
            r.fail("Q_transition", "row needs index, first column and coefficients");
        TransitionRow t;
        t.row = parse_int(r, "Q_transition", toks[0]);
        t.first_col = parse_int(r, "Q_transition", toks[1]);
        for (size_t i = 2; i < toks.size(); ++i)
            t.coeffs.push_back(parse_real(r, "Q_transition", toks[i]));
        if (t.row < 0 || t.first_col < 0)
            r.fail("Q_transition", "negative index");
        p.q_transition.push_back(std::move(t));
    }
    line = r.expect("interior");
    if (line != "interior:")
        r.fail("interior", "expected section 'interior:', found '" + line + "'");
    const auto offs = split(r.expect("interior"));
    const auto coeffs = parse_reals(r, "interior", r.expect("interior"), offs.size());
    if (offs.empty())
        r.fail("interior", "empty stencil");
    p.interior.first_offset = parse_int(r, "interior", offs[0]);
    for (size_t k = 1; k < offs.size(); ++k)
        if (parse_int(r, "interior", offs[k]) != p.interior.first_offset + static_cast<int>(k))
            r.fail("interior", "offsets must be consecutive");
    p.interior.coeffs = coeffs;
    if (r.next(line))
        r.fail("end", "trailing content '" + line + "'");
    return p;
}

void save_operator(const OperatorPair& pair, const std::string& path)
{
    std::ofstream os(path);
    if (!os)
        throw Error("save_operator: cannot open " + path);
    write_operator(os, pair);
    if (!os)
        throw Error("save_operator: write failed for " + path);
}

OperatorPair load_operator(const std::string& path)
{
    std::ifstream is(path);
    if (!is)
        throw ParseError("load_operator: cannot open " + path);
    return read_operator(is, path);
}

} // namespace sbp
