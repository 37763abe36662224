// Walk-through on the butterfly network: solve over GF(2), inspect the matroids, lift to GF(5).

#include <iostream>

#include "netcode/code.hpp"
#include "netcode/field_lift.hpp"
#include "netcode/io.hpp"
#include "netcode/multicast_matroid.hpp"

int main(int argc, char** argv) {
    using namespace netcode;
    const std::string path = argc > 1 ? argv[1] : "data/butterfly.json";
    const auto n = io::load_network(path);

    const auto code = brute_force_solve(n, Field::prime(2));
    if (!code) {
        std::cout << "no GF(2) solution\n";
        return 1;
    }
    std::cout << "GF(2) global kernels:\n" << io::kernels_to_json(code->global()).dump() << "\n";

    const auto paths = receiver_paths(n);
    for (std::size_t i = 0; i < paths.size(); ++i)
        std::cout << "receiver " << n.receiver_ids()[i] << " gammoid: "
                  << io::matroid_report(receiver_gammoid(n, paths[i])).dump() << "\n";
    const auto mm = build_multicast_matroid(n, paths);
    std::cout << "multicast matroid: " << mm.matroid.bases().size() << " bases, " << mm.surplus.size()
              << " outside every receiver gammoid\n";

    const auto lift = lift_solution(*code, Field::prime(5));
    std::cout << "signed matrix:\n" << io::format_matrix(lift.signed_matrix);
    std::cout << "GF(5) code verified: " << (verify_multicast(lift.lifted) ? "yes" : "no") << "\n";
    return 0;
}
