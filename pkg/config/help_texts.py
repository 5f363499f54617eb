# ヘルプテキスト・ガイド文定数
# CLI（bench.py）とレポートビューアで使用するテキストを統合管理

# CLI 関連
CLI_TEXTS = {
    'description': "チェイン法ハッシュテーブル（default / VIP）のベンチマークを実行し、バッチ単位の計測値をCSV/JSONで出力します。",
    'epilog': "例: python bench.py --experiment static --scale desk --seeds 0-9 --out results/static.csv"
}

# CLI 引数のヘルプ
CLI_HELP = {
    'zipf': "Zipf指数 s（0 は一様）",
    'initial_size': "事前投入するキー数",
    'operation_count': "実行する操作数",
    'fetch_proportion': "fetch の比率",
    'insert_proportion': "insert の比率",
    'delete_proportion': "delete の比率",
    'dist_shift_freq': "人気度シフトの周期（操作数、0 でシフトなし）",
    'dist_shift_prct': "シフトで入れ替える上位キーの累積確率（%）",
    'storage_engine': "ChainedHashing / VIPHashing、none はワークロードファイルの保存のみ",
    'key_pattern': "キーの生成パターン",
    'key_order': "挿入順に対する人気度の割り当て（sorted は後から挿入したキーほど人気）",
    'random_seed': "乱数シード（--seeds 未指定時）",
    'experiment': "実験プリセット名",
    'seeds': "シード一覧（例: 0-9 または 0,3,7）",
    'scale': "規模（desk: 手元環境 / paper: 大規模）",
    'out': "出力ファイル（none の場合はワークロードファイル）",
    'format': "出力形式",
    'workload_file': "保存済みワークロードファイルを再生する",
    'batch_size': "1バッチあたりの操作数",
    'load_factor': "初期負荷率（roofline 系はバケット数固定で初期キー数を決める）",
    'pk_cardinality': "結合実験の |R|",
    'ratio': "結合実験の |S|/|R|",
    'verbose': "DEBUG ログを出力する"
}

# ファイルアップロード関連
FILE_UPLOAD_TEXTS = {
    'instruction': "Browse filesでファイルを指定、またはレポートファイル（CSV/JSON）をドラッグ＆ドロップしてください。",
    'success_template': "✅ レポートを読み込みました（{rows}行×{cols}列、文字コード: {encoding}）。下記にプレビューを表示します。",
    'missing_columns_template': "必須列が不足しています: {columns}",
    'help': "bench.py が出力したバッチ単位のレポートを指定してください"
}

# グラフ関連
CHART_TEXTS = {
    'throughput_axis': "スループット（ops/s）",
    'displacement_axis': "平均displacement",
    'batch_axis': "バッチ番号",
    'learn_marker': "learn 開始",
    'warmup_note': "※ バッチ0はウォームアップとして扱いますが、集計から除外しません",
    'gain_note': "**相対差**：(エンジンの中央値 - defaultの中央値) ÷ defaultの中央値（シード間の中央値で比較）"
}

# 共通メッセージ
COMMON_MESSAGES = {
    'data_not_found': "レポートが読み込まれていません。「レポート読み込み」からファイルを指定してください。",
    'no_rows': "条件に該当するバッチがありません",
    'no_baseline': "比較基準（default）のデータがありません"
}

# ページタイトルと説明
PAGE_DESCRIPTIONS = {
    'upload': {
        'title': "レポート読み込み",
        'description': "このセクションでは、ベンチマーク（bench.py）が出力したバッチ単位のレポート（CSV/JSON）を読み込みます。"
    },
    'batch_trend': {
        'title': "バッチ推移",
        'description': "このセクションでは、バッチごとのスループットと平均displacementをエンジン別に折れ線グラフで表示し、learn / sense の遷移位置を重ねて示します。"
    },
    'engine_compare': {
        'title': "エンジン比較",
        'description': "このセクションでは、シード間の中央値でエンジンを比較し、defaultに対する相対差とモード滞在比率を表示します。"
    }
}
