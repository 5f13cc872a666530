#include "imputegp/pipeline_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "imputegp/format.hpp"

namespace imputegp {

namespace {

const HyperParam* find_param(const PrimitiveSpec& spec, std::string_view name)
{
    for (const auto& hp : spec.hyperparams) {
        if (hp.name == name) {
            return &hp;
        }
    }
    return nullptr;
}

// Text to the domain's value when it renders identically, otherwise a value of
// the domain's alternative so the validator can flag it.
ParamValue value_from_text(const HyperParam* hp, std::string_view text)
{
    if (hp) {
        for (const auto& v : hp->domain) {
            if (format_param(v) == text) {
                return v;
            }
        }
        if (std::holds_alternative<std::int64_t>(hp->domain.front())) {
            if (auto i = parse_integer(text)) {
                return static_cast<std::int64_t>(*i);
            }
        } else if (std::holds_alternative<double>(hp->domain.front())) {
            if (auto d = parse_double(text)) {
                return *d;
            }
        }
    }
    return std::string(text);
}

ParamValue value_from_json(const HyperParam* hp, const nlohmann::ordered_json& j)
{
    if (j.is_string()) {
        return value_from_text(hp, j.get<std::string>());
    }
    if (!j.is_number()) {
        throw ParseError("hyperparameter values must be numbers or strings");
    }
    const bool wants_double = hp && std::holds_alternative<double>(hp->domain.front());
    if (j.is_number_integer() && !wants_double) {
        return j.get<std::int64_t>();
    }
    const double d = j.get<double>();
    if (hp && std::holds_alternative<std::int64_t>(hp->domain.front()) && std::floor(d) == d) {
        return static_cast<std::int64_t>(d);
    }
    return d;
}

// Registry order first, unknown names after in input order.
std::vector<BoundParam> order_params(const PrimitiveSpec& spec, std::vector<BoundParam> params)
{
    std::vector<BoundParam> out;
    for (const auto& hp : spec.hyperparams) {
        auto it = std::find_if(params.begin(), params.end(), [&](const BoundParam& b) { return b.name == hp.name; });
        if (it != params.end()) {
            out.push_back(std::move(*it));
            params.erase(it);
        }
    }
    out.insert(out.end(), std::make_move_iterator(params.begin()), std::make_move_iterator(params.end()));
    return out;
}

Stage parse_stage(std::string_view text, const Registry& registry)
{
    text = trim(text);
    const auto open = text.find('(');
    if (open == std::string_view::npos || text.back() != ')') {
        throw ParseError("malformed stage '" + std::string(text) + "'");
    }
    const auto& spec = registry.at(trim(text.substr(0, open)));
    Stage stage{spec.name, {}};
    std::string_view args = text.substr(open + 1, text.size() - open - 2);
    while (!trim(args).empty()) {
        const auto comma = args.find(',');
        const std::string_view item = args.substr(0, comma);
        const auto eq = item.find('=');
        if (eq == std::string_view::npos) {
            throw ParseError("malformed hyperparameter '" + std::string(item) + "' in " + spec.name);
        }
        const std::string name(trim(item.substr(0, eq)));
        stage.params.push_back(BoundParam{name, value_from_text(find_param(spec, name), trim(item.substr(eq + 1)))});
        if (comma == std::string_view::npos) {
            break;
        }
        args.remove_prefix(comma + 1);
    }
    stage.params = order_params(spec, std::move(stage.params));
    return stage;
}

} // namespace

PipelineTree parse_canonical(std::string_view text, const Registry& registry)
{
    PipelineTree p;
    text = trim(text);
    if (text.empty()) {
        throw ParseError("empty pipeline");
    }
    static constexpr std::string_view kArrow = "→";
    while (true) {
        auto sep = text.find(kArrow);
        std::size_t sep_len = kArrow.size();
        if (const auto ascii = text.find("->"); ascii < sep) {
            sep = ascii;
            sep_len = 2;
        }
        p.stages.push_back(parse_stage(text.substr(0, sep), registry));
        if (sep == std::string_view::npos) {
            break;
        }
        text.remove_prefix(sep + sep_len);
    }
    return p;
}

nlohmann::ordered_json to_json(const PipelineTree& p)
{
    auto arr = nlohmann::ordered_json::array();
    for (const auto& s : p.stages) {
        nlohmann::ordered_json params = nlohmann::ordered_json::object();
        for (const auto& b : s.params) {
            std::visit([&](const auto& v) { params[b.name] = v; }, b.value);
        }
        arr.push_back({{"name", s.name}, {"params", params}});
    }
    return arr;
}

PipelineTree pipeline_from_json(const nlohmann::ordered_json& j, const Registry& registry)
{
    const auto& arr = j.is_object() && j.contains("stages") ? j.at("stages") : j;
    if (!arr.is_array()) {
        throw ParseError("pipeline must be an array of stages");
    }
    PipelineTree p;
    for (const auto& item : arr) {
        if (!item.is_object() || !item.contains("name") || !item.at("name").is_string()) {
            throw ParseError("each stage needs a string 'name'");
        }
        const auto& spec = registry.at(item.at("name").get<std::string>());
        Stage stage{spec.name, {}};
        if (item.contains("params")) {
            if (!item.at("params").is_object()) {
                throw ParseError(spec.name + ": 'params' must be an object");
            }
            for (const auto& [name, value] : item.at("params").items()) {
                stage.params.push_back(BoundParam{name, value_from_json(find_param(spec, name), value)});
            }
        }
        stage.params = order_params(spec, std::move(stage.params));
        p.stages.push_back(std::move(stage));
    }
    return p;
}

PipelineTree load_pipeline(const std::filesystem::path& path, const Registry& registry)
{
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open " + path.string());
    }
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    const auto body = trim(text);
    if (!body.empty() && (body.front() == '[' || body.front() == '{')) {
        nlohmann::ordered_json j;
        try {
            j = nlohmann::ordered_json::parse(body);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(path.string() + ": " + e.what());
        }
        return pipeline_from_json(j, registry);
    }
    return parse_canonical(body, registry);
}

void save_pipeline(const PipelineTree& p, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot write " + path.string());
    }
    out << to_json(p).dump(2) << '\n';
}

} // namespace imputegp
