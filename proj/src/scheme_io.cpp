#include "collspin/scheme_io.hpp"

#include <cctype>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <vector>

namespace collspin {

Rational parse_rational(const std::string& token, int line) {
    using boost::multiprecision::cpp_int;
    const auto parse_integer = [&](const std::string& s) -> cpp_int {
        if (s.empty()) throw ParseError(line, "empty coefficient");
        std::size_t start = (s[0] == '+' || s[0] == '-') ? 1 : 0;
        if (start == s.size()) throw ParseError(line, "bad coefficient '" + token + "'");
        for (std::size_t i = start; i < s.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(s[i])))
                throw ParseError(line, "bad coefficient '" + token + "'");
        return cpp_int(s);
    };

    const auto slash = token.find('/');
    if (slash == std::string::npos) return Rational(parse_integer(token));
    const cpp_int num = parse_integer(token.substr(0, slash));
    const cpp_int den = parse_integer(token.substr(slash + 1));
    if (den == 0) throw ParseError(line, "zero denominator in '" + token + "'");
    return Rational(num, den);
}

namespace {

struct RawComponent {
    std::string kind;
    int first_line = 0;
    std::vector<std::vector<Rational>> a, ahat;
    std::vector<Rational> b, bhat;
};

ButcherTableau assemble(const std::vector<std::vector<Rational>>& a,
                        const std::vector<Rational>& b, int line) {
    if (b.empty()) throw ParseError(line, "component is missing its b row");
    const std::size_t s = b.size();
    if (a.size() != s)
        throw ParseError(line, "component needs one a-row per stage (" + std::to_string(s) +
                                   " expected, " + std::to_string(a.size()) + " given)");
    for (const auto& row : a)
        if (row.size() != s) throw ParseError(line, "a-row length does not match stage count");
    return ButcherTableau{a, b};
}

SchemeComponent finish(const RawComponent& raw) {
    if (raw.kind == "rk") {
        if (!raw.ahat.empty() || !raw.bhat.empty())
            throw ParseError(raw.first_line, "rk component cannot have ahat/bhat rows");
        return assemble(raw.a, raw.b, raw.first_line);
    }
    ButcherTableau primary = assemble(raw.a, raw.b, raw.first_line);
    ButcherTableau hat = assemble(raw.ahat, raw.bhat, raw.first_line);
    if (primary.stages() != hat.stages())
        throw ParseError(raw.first_line, "prk halves disagree on the stage count");
    return TableauPair{std::move(primary), std::move(hat)};
}

}  // namespace

PartitionedScheme parse_scheme(std::istream& in) {
    PartitionedScheme scheme;
    std::optional<RawComponent> current;
    std::string line;
    int line_no = 0;

    const auto flush = [&]() {
        if (current) {
            scheme.components.push_back(finish(*current));
            current.reset();
        }
    };

    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream row(line);
        std::string head;
        if (!(row >> head)) continue;

        if (head == "component") {
            std::string kind;
            if (!(row >> kind) || (kind != "rk" && kind != "prk"))
                throw ParseError(line_no, "expected 'component rk' or 'component prk'");
            std::string extra;
            if (row >> extra) throw ParseError(line_no, "trailing content '" + extra + "'");
            flush();
            current = RawComponent{kind, line_no, {}, {}, {}, {}};
            continue;
        }

        if (!current) throw ParseError(line_no, "coefficient row before any 'component' line");
        std::vector<Rational> values;
        std::string token;
        while (row >> token) values.push_back(parse_rational(token, line_no));
        if (values.empty()) throw ParseError(line_no, "row '" + head + "' has no coefficients");

        if (head == "a") {
            current->a.push_back(std::move(values));
        } else if (head == "b") {
            if (!current->b.empty()) throw ParseError(line_no, "duplicate b row");
            current->b = std::move(values);
        } else if (head == "ahat") {
            if (current->kind != "prk") throw ParseError(line_no, "ahat only valid in prk components");
            current->ahat.push_back(std::move(values));
        } else if (head == "bhat") {
            if (current->kind != "prk") throw ParseError(line_no, "bhat only valid in prk components");
            if (!current->bhat.empty()) throw ParseError(line_no, "duplicate bhat row");
            current->bhat = std::move(values);
        } else {
            throw ParseError(line_no, "unknown row '" + head + "'");
        }
    }
    flush();
    if (scheme.components.empty()) throw ParseError(line_no, "no components found");
    return scheme;
}

PartitionedScheme load_scheme(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, "cannot open scheme file '" + path + "'");
    return parse_scheme(in);
}

int run_tableau_check(const std::string& path, std::ostream& out) {
    PartitionedScheme scheme;
    try {
        scheme = load_scheme(path);
    } catch (const ParseError& e) {
        out << "parse error: " << e.what() << "\n";
        return 2;
    }

    CheckResult result;
    try {
        result = check_scheme(scheme);
    } catch (const StageMismatchError& e) {
        out << "stage mismatch: " << e.what() << "\n";
        return 2;
    }

    bool coupling_ok = true, b_match_ok = true, cross_ok = true;
    for (const auto& v : result.violations) {
        if (v.condition == 1) {
            coupling_ok = false;
            out << "FAIL condition (i): component " << v.component + 1 << " cell (" << v.i + 1
                << ", " << v.j + 1 << ")\n";
        } else if (v.condition == 2) {
            b_match_ok = false;
            out << "FAIL condition (ii): component " << v.component + 1 << " stage " << v.i + 1
                << " has b != bhat\n";
        } else {
            cross_ok = false;
            out << "FAIL condition (iii): component " << v.i + 1 << " stage " << v.j + 1
                << " b differs from component 1\n";
        }
    }
    if (coupling_ok) out << "PASS condition (i): coupling identities\n";
    if (b_match_ok) out << "PASS condition (ii): b == bhat in partitioned pairs\n";
    if (cross_ok) out << "PASS condition (iii): b shared across components\n";
    out << (result.pass() ? "scheme PASSES" : "scheme FAILS") << "\n";
    return result.pass() ? 0 : 1;
}

}  // namespace collspin
