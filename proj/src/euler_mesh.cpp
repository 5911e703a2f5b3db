#include "sbp/euler_mesh.hpp"

#include "sbp/error.hpp"

#include <cmath>
#include <map>
#include <string>

namespace sbp::euler {

Point Block::node(int i, int j) const
{
    const double xi = ops_x->grid.nodes[i];
    const double eta = ops_y->grid.nodes[j];
    const Point& c0 = corners[0];
    return {c0.x + x_xi * xi + x_eta * eta, c0.y + y_xi * xi + y_eta * eta};
}

namespace {

using OpsCache = std::map<int, std::shared_ptr<const AssembledOperators>>;

std::shared_ptr<const AssembledOperators> cached(OpsCache& cache, const OperatorPair& pair, int m)
{
    auto it = cache.find(m);
    if (it != cache.end())
        return it->second;
    if (m < pair.min_size())
        throw SizeError("mesh: " + std::to_string(m) + " nodes per direction, operator needs at least " +
                        std::to_string(pair.min_size()));
    auto ops = std::make_shared<const AssembledOperators>(assemble(pair, m));
    cache.emplace(m, ops);
    return ops;
}

Block build_block(const std::array<Point, 4>& c, std::shared_ptr<const AssembledOperators> ox,
                  std::shared_ptr<const AssembledOperators> oy)
{
    Block b;
    b.corners = c;
    b.mx = ox->m;
    b.my = oy->m;
    b.ops_x = std::move(ox);
    b.ops_y = std::move(oy);
    b.x_xi = c[1].x - c[0].x;
    b.y_xi = c[1].y - c[0].y;
    b.x_eta = c[3].x - c[0].x;
    b.y_eta = c[3].y - c[0].y;
    b.jac = b.x_xi * b.y_eta - b.x_eta * b.y_xi;
    const double px = c[1].x + c[3].x - c[0].x, py = c[1].y + c[3].y - c[0].y;
    const double scale = std::abs(b.x_xi) + std::abs(b.y_xi) + std::abs(b.x_eta) + std::abs(b.y_eta);
    if (std::abs(px - c[2].x) + std::abs(py - c[2].y) > 1e-13 * scale)
        throw ParameterError("make_block: corners do not form a parallelogram");
    return b;
}

std::vector<Point> edge_nodes(const Block& b, Side s)
{
    std::vector<Point> pts;
    if (s == Side::west || s == Side::east) {
        const int i = s == Side::west ? 0 : b.mx - 1;
        for (int j = 0; j < b.my; ++j)
            pts.push_back(b.node(i, j));
    } else {
        const int j = s == Side::south ? 0 : b.my - 1;
        for (int i = 0; i < b.mx; ++i)
            pts.push_back(b.node(i, j));
    }
    return pts;
}

} // namespace

Block make_block(const std::array<Point, 4>& corners, int mx, int my, const OperatorPair& pair)
{
    OpsCache cache;
    return build_block(corners, cached(cache, pair, mx), cached(cache, pair, my));
}

int BlockMesh2D::total_nodes() const
{
    int n = 0;
    for (const auto& b : blocks)
        n += b.nodes();
    return n;
}

double BlockMesh2D::area() const
{
    double a = 0.0;
    for (const auto& b : blocks)
        for (int j = 0; j < b.my; ++j)
            for (int i = 0; i < b.mx; ++i)
                a += b.weight(i, j);
    return a;
}

void BlockMesh2D::validate(double tol) const
{
    for (size_t k = 0; k < blocks.size(); ++k)
        if (!(blocks[k].jac > 0.0))
            throw ParameterError("mesh: block " + std::to_string(k) + " has J <= 0");
    for (const auto& c : connections) {
        if (c.a < 0 || c.b < 0 || c.a >= static_cast<int>(blocks.size()) ||
            c.b >= static_cast<int>(blocks.size()))
            throw ParameterError("mesh: connection refers to a missing block");
        const bool ew = c.side_a == Side::east && c.side_b == Side::west;
        const bool ns = c.side_a == Side::north && c.side_b == Side::south;
        if (!ew && !ns)
            throw ParameterError("mesh: only east-west and north-south connections are supported");
        const Block& A = blocks[c.a];
        const Block& B = blocks[c.b];
        const auto pa = edge_nodes(A, c.side_a);
        const auto pb = edge_nodes(B, c.side_b);
        if (pa.size() != pb.size())
            throw SizeError("mesh: interface node counts differ (" + std::to_string(pa.size()) + " vs " +
                            std::to_string(pb.size()) + ")");
        // Periodic images differ by one constant shift.
        const double sx = pb[0].x - pa[0].x, sy = pb[0].y - pa[0].y;
        double ext = 0.0;
        for (const auto& p : pa)
            ext = std::max(ext, std::max(std::abs(p.x), std::abs(p.y)));
        for (size_t k = 0; k < pa.size(); ++k)
            if (std::abs(pb[k].x - pa[k].x - sx) + std::abs(pb[k].y - pa[k].y - sy) > tol * std::max(1.0, ext))
                throw ParameterError("mesh: paired edge nodes do not coincide");
        const auto na = ew ? A.n_xi() : A.n_eta();
        const auto nb = ew ? B.n_xi() : B.n_eta();
        if (std::abs(na[0] - nb[0]) + std::abs(na[1] - nb[1]) > tol * std::max(1.0, ext))
            throw ParameterError("mesh: paired edges have different lengths or orientation");
    }
}

BlockMesh2D chevron_mesh(int m, const OperatorPair& pair, const ChevronGeometry& geo)
{
    if (!(geo.scale > 0.0) || !std::isfinite(geo.y_shift))
        throw ParameterError("chevron_mesh: scale must be positive");
    auto s = [&geo](double x, double y) { return Point{geo.scale * x, geo.scale * y + geo.y_shift}; };
    OpsCache cache;
    auto ops = cached(cache, pair, m);
    BlockMesh2D mesh;
    mesh.blocks.push_back(build_block({s(-2, -1), s(0, -0.5), s(0, 1.5), s(-2, 1)}, ops, ops));
    mesh.blocks.push_back(build_block({s(0, -0.5), s(2, -1), s(2, 1), s(0, 1.5)}, ops, ops));
    mesh.connections = {
        {0, Side::east, 1, Side::west},
        {1, Side::east, 0, Side::west},
        {0, Side::north, 0, Side::south},
        {1, Side::north, 1, Side::south},
    };
    mesh.validate();
    return mesh;
}

BlockMesh2D khi_mesh(int K, int m, const OperatorPair& pair)
{
    const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(K))));
    if (K < 1 || n * n != K)
        throw ParameterError("khi_mesh: K must be a perfect square, got " + std::to_string(K));
    OpsCache cache;
    auto ops = cached(cache, pair, m);
    const double w = 2.0 / n;
    BlockMesh2D mesh;
    for (int bj = 0; bj < n; ++bj)
        for (int bi = 0; bi < n; ++bi) {
            const double x0 = -1.0 + w * bi, y0 = -1.0 + w * bj;
            const double x1 = bi == n - 1 ? 1.0 : x0 + w, y1 = bj == n - 1 ? 1.0 : y0 + w;
            mesh.blocks.push_back(build_block({Point{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}, ops, ops));
        }
    for (int bj = 0; bj < n; ++bj)
        for (int bi = 0; bi < n; ++bi) {
            const int k = bi + n * bj;
            mesh.connections.push_back({k, Side::east, (bi + 1) % n + n * bj, Side::west});
            mesh.connections.push_back({k, Side::north, bi + n * ((bj + 1) % n), Side::south});
        }
    mesh.validate();
    return mesh;
}

} // namespace sbp::euler
