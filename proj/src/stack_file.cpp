// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The polsim Authors

#include <optional>
#include <sstream>

#include "polsim/csv.hpp"
#include "polsim/error.hpp"
#include "polsim/thinfilm.hpp"

namespace polsim::thinfilm {

LayerStack parse_stack(const std::string& text, const std::string& source_name)
{
    using text::parse_double;

    std::optional<Complex> ambient;
    std::optional<Complex> substrate;
    std::vector<Layer> layers;

    const auto lines = text::read_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        const auto tokens = text::split(text::strip_comment(lines[i]), " \t", false);
        if (tokens.empty()) {
            continue;
        }
        auto fail = [&](std::size_t column, const std::string& msg) {
            throw ParseError(source_name, line_no, column, msg);
        };
        auto index_at = [&](std::size_t k) {
            const double re = parse_double(tokens[k], source_name, line_no);
            const double im = parse_double(tokens[k + 1], source_name, line_no);
            if (!(re > 0.0)) {
                fail(tokens[k].column, "real part of the index must be positive");
            }
            if (im < 0.0) {
                fail(tokens[k + 1].column, "imaginary part of the index must be non-negative");
            }
            return Complex(re, im);
        };

        const auto head = tokens[0].text;
        if (head == "ambient" || head == "substrate") {
            if (tokens.size() != 3) {
                fail(0, std::string(head) + " expects: " + std::string(head) + " index_real index_imag");
            }
            if (!layers.empty()) {
                fail(tokens[0].column, std::string(head) + " must precede the layer lines");
            }
            auto& slot = head == "ambient" ? ambient : substrate;
            if (slot) {
                fail(tokens[0].column, "duplicate " + std::string(head) + " line");
            }
            slot = index_at(1);
            continue;
        }
        if (tokens.size() != 3) {
            fail(0, "layer line expects: index_real index_imag thickness_nm");
        }
        const Complex n = index_at(0);
        const double d = parse_double(tokens[2], source_name, line_no);
        if (!(d > 0.0)) {
            fail(tokens[2].column, "layer thickness must be positive");
        }
        layers.push_back({n, d});
    }
    if (!ambient) {
        throw ParseError(source_name, lines.size(), 0, "missing 'ambient' line");
    }
    if (!substrate) {
        throw ParseError(source_name, lines.size(), 0, "missing 'substrate' line");
    }
    return LayerStack{*ambient, std::move(layers), *substrate};
}

LayerStack load_stack(const std::filesystem::path& path)
{
    return parse_stack(text::read_file(path), path.string());
}

std::string format_stack(const LayerStack& stack)
{
    using text::format_double;
    std::ostringstream os;
    os << "ambient " << format_double(stack.ambient.real()) << ' ' << format_double(stack.ambient.imag()) << '\n';
    os << "substrate " << format_double(stack.substrate.real()) << ' ' << format_double(stack.substrate.imag())
       << '\n';
    for (const auto& layer : stack.layers) {
        os << format_double(layer.index.real()) << ' ' << format_double(layer.index.imag()) << ' '
           << format_double(layer.thickness_nm) << '\n';
    }
    return os.str();
}

}  // namespace polsim::thinfilm
