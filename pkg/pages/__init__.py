# pages パッケージ
# VIPハッシュ ベンチマーク - レポートビューアのページ
