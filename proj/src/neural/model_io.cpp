#include "mad/neural/model_io.hpp"

#include <fstream>
#include <json.hpp>

#include "../detail/binary_io.hpp"

namespace mad::nn {
namespace {

using detail::FormatError;
using json = nlohmann::ordered_json;

constexpr char kMagic[4] = {'M', 'A', 'D', 'N'};

json mlp_manifest(const Mlp& m) {
    json acts = json::array();
    for (auto a : m.activations()) acts.push_back(std::string(to_string(a)));
    return json{{"sizes", m.sizes()}, {"activations", acts}, {"bias", m.has_bias()}};
}

Mlp mlp_from_manifest(const json& j) {
    std::vector<Activation> acts;
    for (const auto& a : j.at("activations")) acts.push_back(parse_activation(a.get<std::string>()));
    return Mlp(j.at("sizes").get<std::vector<std::size_t>>(), acts, j.at("bias").get<bool>());
}

}  // namespace

void save_model(const OperatorModel& model, std::ostream& os) {
    const auto& c = model.config();
    json manifest{{"arch", std::string(to_string(c.arch))},
                  {"dim", c.dim},
                  {"boundary_inputs", c.boundary_inputs},
                  {"source_inputs", c.source_inputs},
                  {"latent", c.latent},
                  {"width", c.width},
                  {"depth", c.depth},
                  {"boundary_width", c.boundary_width},
                  {"trunk_activation", std::string(to_string(c.trunk_activation))},
                  {"branch_init", std::string(to_string(c.branch_init))}};
    json nets = json::array();
    for (const auto& net : model.nets()) {
        nets.push_back({{"branch", mlp_manifest(net.branch())}, {"trunk", mlp_manifest(net.trunk())}});
    }
    manifest["nets"] = nets;
    const std::string text = manifest.dump();

    os.write(kMagic, 4);
    detail::put_le<std::uint16_t>(os, kModelFormatVersion);
    detail::put_le<std::uint32_t>(os, static_cast<std::uint32_t>(text.size()));
    os.write(text.data(), static_cast<std::streamsize>(text.size()));
    for (const auto& net : model.nets()) {
        for (const Mlp* m : {&net.branch(), &net.trunk()}) {
            detail::put_le<std::uint64_t>(os, m->params().size());
            detail::put_f64_block(os, m->params());
        }
    }
    if (!os) throw std::runtime_error("save_model: write failed");
}

void save_model(const OperatorModel& model, const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    save_model(model, os);
}

OperatorModel load_model(std::istream& is) {
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) throw FormatError("not a model file (bad magic)");
    const auto version = detail::get_le<std::uint16_t>(is, "version");
    if (version != kModelFormatVersion) {
        throw FormatError("unsupported model format version " + std::to_string(version));
    }
    const auto len = detail::get_le<std::uint32_t>(is, "manifest length");
    std::string text(len, '\0');
    if (!is.read(text.data(), len)) throw FormatError("truncated model manifest");
    json manifest;
    try {
        manifest = json::parse(text);
    } catch (const json::exception& e) {
        throw FormatError(std::string("invalid model manifest: ") + e.what());
    }

    ModelConfig c;
    c.arch = parse_arch(manifest.at("arch").get<std::string>());
    c.dim = manifest.at("dim").get<std::size_t>();
    c.boundary_inputs = manifest.at("boundary_inputs").get<std::size_t>();
    c.source_inputs = manifest.at("source_inputs").get<std::size_t>();
    c.latent = manifest.at("latent").get<std::size_t>();
    c.width = manifest.at("width").get<std::size_t>();
    c.depth = manifest.at("depth").get<std::size_t>();
    c.boundary_width = manifest.at("boundary_width").get<std::size_t>();
    c.trunk_activation = parse_activation(manifest.at("trunk_activation").get<std::string>());
    c.branch_init = parse_branch_init(manifest.at("branch_init").get<std::string>());

    std::vector<DeepOnet> nets;
    for (const auto& jn : manifest.at("nets")) {
        Mlp branch = mlp_from_manifest(jn.at("branch"));
        Mlp trunk = mlp_from_manifest(jn.at("trunk"));
        for (Mlp* m : {&branch, &trunk}) {
            const auto count = detail::get_le<std::uint64_t>(is, "block count");
            if (count != m->params().size()) throw FormatError("parameter block size disagrees with the manifest");
            detail::get_f64_block(is, m->params(), "parameters");
        }
        nets.emplace_back(std::move(branch), std::move(trunk));
    }
    if (is.peek() != std::char_traits<char>::eof()) throw FormatError("trailing bytes after model payload");
    return OperatorModel(c, std::move(nets));
}

OperatorModel load_model(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path.string());
    return load_model(is);
}

}  // namespace mad::nn
