# utils パッケージ
# VIPハッシュ ベンチマーク - ハッシュテーブル・ワークロード・計測
