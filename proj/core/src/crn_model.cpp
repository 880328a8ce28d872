#include "monocrn/crn_model.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

namespace monocrn {

namespace {

std::string_view trim(std::string_view s) {
    const auto not_space = [](char c) { return c != ' ' && c != '\t' && c != '\r' && c != '\n'; };
    while (!s.empty() && !not_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && !not_space(s.back())) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

bool valid_name(std::string_view s) {
    return !s.empty() && is_ident_start(s.front()) && std::all_of(s.begin(), s.end(), is_ident_char);
}

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::vector<Term> merge_terms(std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.species < b.species; });
    std::vector<Term> out;
    for (const auto& t : terms) {
        if (!out.empty() && out.back().species == t.species) {
            out.back().coeff += t.coeff;
        } else {
            out.push_back(t);
        }
    }
    return out;
}

// Monomial prod s_i^c_i over `terms`.
double monomial(const std::vector<Term>& terms, const Vec& s) {
    double p = 1.0;
    for (const auto& t : terms) {
        const double x = s(static_cast<Eigen::Index>(t.species));
        for (int c = 0; c < t.coeff; ++c) p *= x;
    }
    return p;
}

// Adds scale * d(monomial)/dS_i into row `row` of `jac`.
void add_monomial_gradient(const std::vector<Term>& terms, const Vec& s, double scale, Mat& jac,
                           Eigen::Index row) {
    for (std::size_t k = 0; k < terms.size(); ++k) {
        double d = scale * terms[k].coeff;
        const double xk = s(static_cast<Eigen::Index>(terms[k].species));
        for (int c = 0; c < terms[k].coeff - 1; ++c) d *= xk;
        for (std::size_t l = 0; l < terms.size(); ++l) {
            if (l == k) continue;
            const double xl = s(static_cast<Eigen::Index>(terms[l].species));
            for (int c = 0; c < terms[l].coeff; ++c) d *= xl;
        }
        jac(row, static_cast<Eigen::Index>(terms[k].species)) += d;
    }
}

void check_concentrations(const ReactionNetwork& net, const Vec& s, const char* what) {
    require_size(s.size(), static_cast<Eigen::Index>(net.n()), what);
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (!(s(i) >= 0.0)) {
            throw PreconditionError(std::string(what) + ": negative concentration for species '" +
                                    net.species()[static_cast<std::size_t>(i)].name + "'");
        }
    }
}

class NetworkParser {
public:
    ReactionNetwork parse(std::string_view text) {
        std::size_t line_no = 0;
        for (std::string_view raw : split(text, '\n')) {
            ++line_no;
            if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
            const std::string_view line = trim(raw);
            if (line.empty()) continue;
            if (line.rfind("species:", 0) == 0) {
                parse_species_directive(line.substr(8), line_no);
            } else {
                parse_reaction(line, line_no);
            }
        }
        if (reactions_.empty()) throw ParseError(0, "empty network");
        return ReactionNetwork(names_, reactions_);
    }

private:
    std::size_t intern(std::string_view name) {
        for (std::size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == name) return i;
        names_.emplace_back(name);
        return names_.size() - 1;
    }

    void parse_species_directive(std::string_view body, std::size_t line_no) {
        if (!reactions_.empty()) throw ParseError(line_no, "species declaration after the first reaction");
        for (std::string_view tok : split(body, ',')) {
            tok = trim(tok);
            if (tok.empty()) continue;
            if (!valid_name(tok)) throw ParseError(line_no, "invalid species name '" + std::string(tok) + "'");
            if (std::find(names_.begin(), names_.end(), tok) != names_.end())
                throw ParseError(line_no, "species '" + std::string(tok) + "' declared twice");
            names_.emplace_back(tok);
        }
    }

    std::vector<Term> parse_side(std::string_view side, std::size_t line_no) {
        side = trim(side);
        std::vector<Term> terms;
        if (side.empty() || side == "0") return terms;
        for (std::string_view tok : split(side, '+')) {
            tok = trim(tok);
            if (tok.empty()) throw ParseError(line_no, "empty term in reaction side");
            std::size_t pos = 0;
            while (pos < tok.size() && std::isdigit(static_cast<unsigned char>(tok[pos]))) ++pos;
            int coeff = 1;
            if (pos > 0) {
                auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + pos, coeff);
                if (ec != std::errc() || ptr != tok.data() + pos)
                    throw ParseError(line_no, "bad coefficient in '" + std::string(tok) + "'");
                if (coeff <= 0)
                    throw ParseError(line_no, "stoichiometric coefficient must be positive in '" +
                                                  std::string(tok) + "'");
            }
            const std::string_view name = trim(tok.substr(pos));
            if (!valid_name(name)) throw ParseError(line_no, "invalid species term '" + std::string(tok) + "'");
            terms.push_back({intern(name), coeff});
        }
        return merge_terms(std::move(terms));
    }

    void parse_reaction(std::string_view line, std::size_t line_no) {
        const auto semi = line.find(';');
        if (semi == std::string_view::npos) throw ParseError(line_no, "expected '; k=<value>' after reaction");
        const std::string_view equation = line.substr(0, semi);
        const std::string_view constants = line.substr(semi + 1);

        Reaction rxn;
        std::string_view lhs, rhs;
        if (auto p = equation.find("<->"); p != std::string_view::npos) {
            rxn.reversible = true;
            lhs = equation.substr(0, p);
            rhs = equation.substr(p + 3);
        } else if (auto q = equation.find("->"); q != std::string_view::npos) {
            lhs = equation.substr(0, q);
            rhs = equation.substr(q + 2);
        } else {
            throw ParseError(line_no, "expected '->' or '<->'");
        }
        if (rhs.find("->") != std::string_view::npos || lhs.find('<') != std::string_view::npos ||
            rhs.find('<') != std::string_view::npos) {
            throw ParseError(line_no, "more than one arrow");
        }
        rxn.reactants = parse_side(lhs, line_no);
        rxn.products = parse_side(rhs, line_no);
        if (rxn.reactants.empty() && rxn.products.empty())
            throw ParseError(line_no, "reaction has no reactants and no products");

        std::optional<double> kf, kr;
        for (std::string_view item : split(constants, ',')) {
            item = trim(item);
            if (item.empty()) throw ParseError(line_no, "empty rate-constant assignment");
            const auto eq = item.find('=');
            if (eq == std::string_view::npos) throw ParseError(line_no, "expected name=value, got '" + std::string(item) + "'");
            const std::string_view key = trim(item.substr(0, eq));
            const std::string_view val = trim(item.substr(eq + 1));
            double x = 0.0;
            auto [ptr, ec] = std::from_chars(val.data(), val.data() + val.size(), x);
            if (val.empty() || ec != std::errc() || ptr != val.data() + val.size() || !std::isfinite(x))
                throw ParseError(line_no, "bad number '" + std::string(val) + "'");
            if (key == "k" || key == "kf") {
                if (kf) throw ParseError(line_no, "duplicate rate-constant assignment '" + std::string(key) + "'");
                kf = x;
            } else if (key == "kr") {
                if (!rxn.reversible) throw ParseError(line_no, "reverse constant on an irreversible arrow");
                if (kr) throw ParseError(line_no, "duplicate rate-constant assignment 'kr'");
                kr = x;
            } else {
                throw ParseError(line_no, "unknown rate constant '" + std::string(key) + "'");
            }
        }
        if (!kf) throw ParseError(line_no, "missing forward rate constant");
        if (!(*kf > 0.0)) throw ParseError(line_no, "forward rate constant must be positive");
        if (rxn.reversible) {
            if (!kr) throw ParseError(line_no, "reversible arrow requires kr");
            if (*kr < 0.0) throw ParseError(line_no, "reverse rate constant must be nonnegative");
            rxn.k_reverse = *kr;
        }
        rxn.k_forward = *kf;
        reactions_.push_back(std::move(rxn));
    }

    std::vector<std::string> names_;
    std::vector<Reaction> reactions_;
};

}  // namespace

ReactionNetwork::ReactionNetwork(std::vector<std::string> species, std::vector<Reaction> reactions) {
    if (species.empty()) throw PreconditionError("network needs at least one species");
    if (reactions.empty()) throw PreconditionError("network needs at least one reaction");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < species.size(); ++i) {
        if (!valid_name(species[i])) throw PreconditionError("invalid species name '" + species[i] + "'");
        if (!seen.insert(species[i]).second) throw PreconditionError("duplicate species '" + species[i] + "'");
        species_.push_back({species[i], i});
    }
    for (auto& r : reactions) {
        if (!(r.k_forward > 0.0) || !std::isfinite(r.k_forward))
            throw PreconditionError("forward rate constant must be positive");
        if (!(r.k_reverse >= 0.0) || !std::isfinite(r.k_reverse))
            throw PreconditionError("reverse rate constant must be nonnegative");
        if (!r.reversible && r.k_reverse != 0.0)
            throw PreconditionError("irreversible reaction with a reverse rate constant");
        if (r.reactants.empty() && r.products.empty())
            throw PreconditionError("reaction has no reactants and no products");
        for (const auto* side : {&r.reactants, &r.products}) {
            for (const auto& t : *side) {
                if (t.coeff <= 0) throw PreconditionError("stoichiometric coefficients must be positive");
                if (t.species >= species_.size()) throw PreconditionError("reaction references unknown species");
            }
        }
        r.reactants = merge_terms(std::move(r.reactants));
        r.products = merge_terms(std::move(r.products));
    }
    reactions_ = std::move(reactions);

    gamma_ = Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(n()), static_cast<Eigen::Index>(m()));
    for (std::size_t j = 0; j < m(); ++j) {
        const auto col = static_cast<Eigen::Index>(j);
        for (const auto& t : reactions_[j].reactants) gamma_(static_cast<Eigen::Index>(t.species), col) -= t.coeff;
        for (const auto& t : reactions_[j].products) gamma_(static_cast<Eigen::Index>(t.species), col) += t.coeff;
    }
    gamma_real_ = gamma_.cast<double>();
}

std::optional<std::size_t> ReactionNetwork::index_of(std::string_view name) const {
    for (const auto& s : species_)
        if (s.name == name) return s.index;
    return std::nullopt;
}

std::vector<std::pair<std::string, double>> ReactionNetwork::rate_constants() const {
    std::vector<std::pair<std::string, double>> out;
    for (std::size_t j = 0; j < m(); ++j) {
        out.emplace_back("k" + std::to_string(j + 1), reactions_[j].k_forward);
        if (reactions_[j].reversible) out.emplace_back("k-" + std::to_string(j + 1), reactions_[j].k_reverse);
    }
    return out;
}

ReactionNetwork ReactionNetwork::with_rate_constant(std::string_view name, double value) const {
    std::string_view rest = name;
    bool reverse = false;
    if (rest.rfind("k-", 0) == 0) {
        reverse = true;
        rest.remove_prefix(2);
    } else if (rest.rfind("k", 0) == 0) {
        rest.remove_prefix(1);
    } else {
        throw PreconditionError("unknown rate constant '" + std::string(name) + "'");
    }
    std::size_t j = 0;
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), j);
    if (rest.empty() || ec != std::errc() || ptr != rest.data() + rest.size() || j == 0 || j > m())
        throw PreconditionError("unknown rate constant '" + std::string(name) + "'");

    std::vector<std::string> names;
    for (const auto& s : species_) names.push_back(s.name);
    auto reactions = reactions_;
    auto& r = reactions[j - 1];
    if (reverse) {
        if (!r.reversible) throw PreconditionError("reaction " + std::to_string(j) + " is irreversible");
        r.k_reverse = value;
    } else {
        r.k_forward = value;
    }
    return ReactionNetwork(std::move(names), std::move(reactions));
}

std::string ReactionNetwork::to_text() const {
    std::ostringstream out;
    out << "species:";
    for (std::size_t i = 0; i < n(); ++i) out << (i ? ", " : " ") << species_[i].name;
    out << '\n';
    const auto side = [&](const std::vector<Term>& terms) {
        if (terms.empty()) return std::string("0");
        std::string s;
        for (std::size_t k = 0; k < terms.size(); ++k) {
            if (k) s += " + ";
            if (terms[k].coeff != 1) s += std::to_string(terms[k].coeff) + " ";
            s += species_[terms[k].species].name;
        }
        return s;
    };
    for (const auto& r : reactions_) {
        out << side(r.reactants) << (r.reversible ? " <-> " : " -> ") << side(r.products) << " ; ";
        if (r.reversible) {
            out << "kf=" << format_double(r.k_forward) << ", kr=" << format_double(r.k_reverse);
        } else {
            out << "k=" << format_double(r.k_forward);
        }
        out << '\n';
    }
    return out.str();
}

ReactionNetwork parse_network(std::string_view text) { return NetworkParser{}.parse(text); }

namespace detail {

Vec rates_unchecked(const ReactionNetwork& net, const Vec& s) {
    Vec r(static_cast<Eigen::Index>(net.m()));
    for (std::size_t j = 0; j < net.m(); ++j) {
        const auto& rxn = net.reactions()[j];
        double rate = rxn.k_forward * monomial(rxn.reactants, s);
        if (rxn.reversible) rate -= rxn.k_reverse * monomial(rxn.products, s);
        r(static_cast<Eigen::Index>(j)) = rate;
    }
    return r;
}

Mat rate_jacobian_unchecked(const ReactionNetwork& net, const Vec& s) {
    Mat jac = Mat::Zero(static_cast<Eigen::Index>(net.m()), static_cast<Eigen::Index>(net.n()));
    for (std::size_t j = 0; j < net.m(); ++j) {
        const auto& rxn = net.reactions()[j];
        const auto row = static_cast<Eigen::Index>(j);
        add_monomial_gradient(rxn.reactants, s, rxn.k_forward, jac, row);
        if (rxn.reversible) add_monomial_gradient(rxn.products, s, -rxn.k_reverse, jac, row);
    }
    return jac;
}

}  // namespace detail

Vec mass_action_rates(const ReactionNetwork& net, const Vec& s) {
    check_concentrations(net, s, "mass_action_rates");
    return detail::rates_unchecked(net, s);
}

Mat rate_jacobian(const ReactionNetwork& net, const Vec& s) {
    check_concentrations(net, s, "rate_jacobian");
    return detail::rate_jacobian_unchecked(net, s);
}

std::vector<RationalVector> conservation_laws(const ReactionNetwork& net) {
    auto basis = left_kernel_basis(net.gamma_exact());
    for (auto& c : basis) c = primitive_integer(c);
    return basis;
}

std::vector<RationalVector> semipositive_conservation_laws(const ReactionNetwork& net) {
    const std::size_t n = net.n();
    const std::size_t m = net.m();

    // Each row: m stoichiometry entries followed by n identity entries.
    using Row = std::vector<BigInt>;
    std::vector<Row> rows;
    for (std::size_t i = 0; i < n; ++i) {
        Row r(m + n);
        for (std::size_t j = 0; j < m; ++j)
            r[j] = net.gamma()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        r[m + i] = 1;
        rows.push_back(std::move(r));
    }

    const auto normalize = [](Row& r) {
        BigInt g = 0;
        for (const auto& x : r) g = boost::multiprecision::gcd(g, x);
        if (g > 1)
            for (auto& x : r) x /= g;
    };
    const auto support = [&](const Row& r) {
        std::vector<bool> s(n);
        for (std::size_t i = 0; i < n; ++i) s[i] = r[m + i] != 0;
        return s;
    };
    const auto contains = [](const std::vector<bool>& big, const std::vector<bool>& small) {
        for (std::size_t i = 0; i < big.size(); ++i)
            if (small[i] && !big[i]) return false;
        return true;
    };

    for (std::size_t j = 0; j < m; ++j) {
        std::vector<Row> next;
        for (const auto& r : rows)
            if (r[j] == 0) next.push_back(r);
        for (const auto& p : rows) {
            if (p[j] <= 0) continue;
            for (const auto& q : rows) {
                if (q[j] >= 0) continue;
                Row c(m + n);
                const BigInt a = -q[j];
                const BigInt b = p[j];
                for (std::size_t k = 0; k < m + n; ++k) c[k] = a * p[k] + b * q[k];
                normalize(c);
                next.push_back(std::move(c));
            }
        }
        // Keep only rows with minimal support.
        std::vector<Row> minimal;
        for (std::size_t a = 0; a < next.size(); ++a) {
            const auto sa = support(next[a]);
            bool dominated = false;
            for (std::size_t b = 0; b < next.size() && !dominated; ++b) {
                if (a == b) continue;
                const auto sb = support(next[b]);
                if (contains(sa, sb) && (sa != sb || b < a)) dominated = true;
            }
            if (!dominated) minimal.push_back(next[a]);
        }
        rows = std::move(minimal);
    }

    std::vector<RationalVector> out;
    for (const auto& r : rows) {
        RationalVector c(n);
        for (std::size_t i = 0; i < n; ++i) c[i] = Rational(r[m + i]);
        out.push_back(primitive_integer(c));
    }
    std::sort(out.begin(), out.end(), [](const RationalVector& a, const RationalVector& b) {
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                            [](const Rational& x, const Rational& y) { return x > y; });
    });
    return out;
}

std::vector<bool> bounded_by_conservation(const ReactionNetwork& net) {
    std::vector<bool> covered(net.n(), false);
    for (const auto& c : semipositive_conservation_laws(net))
        for (std::size_t i = 0; i < net.n(); ++i)
            if (c[i] > 0) covered[i] = true;
    return covered;
}

}  // namespace monocrn
