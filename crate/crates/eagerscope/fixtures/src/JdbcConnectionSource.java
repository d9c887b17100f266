public class JdbcConnectionSource {
    private String url;
    private String username;
    private String password;
    private boolean open;

    public JdbcConnectionSource(String url) {
        this.url = url;
        this.open = true;
    }

    public void setUsername(String username) {
        this.username = username;
    }

    public void setPassword(String password) {
        this.password = password;
    }

    public DatabaseConnection getReadOnlyConnection(String tableName) {
        return new JdbcDatabaseConnection(url, username, password);
    }

    public void close() {
        this.open = false;
    }
}
